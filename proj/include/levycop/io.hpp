#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "levycop/harness.hpp"
#include "levycop/levy_model.hpp"

namespace levycop {

//! Models by name: "nu0.5" or "beta_family:<beta>" (compensated),
//! "beta_two" (compensated), "cpp_log_density" and "single_jump" (compound
//! Poisson, atom at (1, 1)). A suffix "+brownian" adds Sigma = I.
LevyModelSpec model_from_name(const std::string& name);
std::vector<std::string> model_names();

//! JSON model: {"kind", "beta", "points": [{"location": [x, y], "weight": w}],
//! "representation": "compensated" | "cpp", "sigma": [[..],[..]],
//! "alpha": [..], "label"}. Custom densities have no JSON form.
LevyModelSpec model_from_json(const std::string& text);
std::string model_to_json(const LevyModelSpec& model);

//! A file path holding JSON, otherwise a name for model_from_name.
LevyModelSpec load_model(const std::string& name_or_path);

//! JSON experiment config with the ExperimentConfig field names; "model" is a
//! JSON object or a model name, and "preset" seeds the remaining fields.
ExperimentConfig experiment_from_json(const std::string& text);
std::string experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment(const std::filesystem::path& path);

//! Truth CSV with columns a, b, U, U1_a, U2_b over the product of the ladders.
void write_truth_csv(std::ostream& out, const LevyModelSpec& model, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& b);

std::string read_text(const std::filesystem::path& path);

}  // namespace levycop
