#include "levycop/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace levycop {

namespace {

using nlohmann::json;

Eigen::Matrix2d matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    throw std::invalid_argument("sigma must be a 2x2 array");
  Eigen::Matrix2d m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = j[r][c].get<double>();
  return m;
}

Eigen::Vector2d vector_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string(what) + " must be a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

LevyModelSpec model_from_object(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
  const DensityKind kind = density_kind_from_string(j.at("kind").get<std::string>());
  if (kind == DensityKind::custom)
    throw std::invalid_argument("custom densities cannot be loaded from JSON");
  DensityParams params;
  params.beta = j.value("beta", 0.5);
  params.label = j.value("label", std::string{});
  if (j.contains("points"))
    for (const auto& p : j.at("points"))
      params.atoms.push_back({vector_from_json(p.at("location"), "location"),
                              p.at("weight").get<double>()});
  JumpDensitySpec jumps = make_density(kind, params);

  const bool finite = jumps.finite_activity();
  const std::string rep = j.value("representation", finite ? "cpp" : "compensated");
  const Eigen::Matrix2d sigma =
      j.contains("sigma") ? matrix_from_json(j.at("sigma")) : Eigen::Matrix2d::Zero();
  const Eigen::Vector2d alpha =
      j.contains("alpha") ? vector_from_json(j.at("alpha"), "alpha") : Eigen::Vector2d::Zero();
  LevyModelSpec model;
  if (rep == "cpp") {
    model = cpp_model(std::move(jumps), alpha);
    model.sigma = sigma;
  } else if (rep == "compensated") {
    model = compensated_model(std::move(jumps), sigma, alpha);
  } else {
    throw std::invalid_argument("representation must be 'cpp' or 'compensated'");
  }
  if (j.contains("label")) model.label = j.at("label").get<std::string>();
  validate(model);
  return model;
}

json model_object(const LevyModelSpec& model) {
  if (model.jumps.kind == DensityKind::custom)
    throw std::invalid_argument("custom densities have no JSON form");
  json j;
  j["kind"] = to_string(model.jumps.kind);
  if (model.jumps.kind == DensityKind::beta_family) j["beta"] = model.jumps.beta;
  if (!model.jumps.atoms.empty()) {
    j["points"] = json::array();
    for (const auto& a : model.jumps.atoms)
      j["points"].push_back({{"location", {a.location.x(), a.location.y()}}, {"weight", a.weight}});
  }
  j["representation"] =
      model.representation == Representation::compensated ? "compensated" : "cpp";
  j["sigma"] = {{model.sigma(0, 0), model.sigma(0, 1)}, {model.sigma(1, 0), model.sigma(1, 1)}};
  j["alpha"] = {model.alpha(0), model.alpha(1)};
  j["label"] = model.label;
  return j;
}

LevyModelSpec model_from_value(const json& j) {
  if (j.is_string()) return model_from_name(j.get<std::string>());
  return model_from_object(j);
}

}  // namespace

LevyModelSpec model_from_name(const std::string& full_name) {
  std::string name = full_name;
  bool brownian = false;
  const std::string suffix = "+brownian";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    brownian = true;
    name.resize(name.size() - suffix.size());
  }
  LevyModelSpec model;
  if (name == "nu0.5") {
    model = compensated_model(beta_family(0.5));
  } else if (name.rfind("beta_family:", 0) == 0) {
    model = compensated_model(beta_family(std::stod(name.substr(12))));
  } else if (name == "beta_two") {
    model = compensated_model(beta_two());
  } else if (name == "cpp_log_density") {
    model = cpp_model(cpp_log_density());
  } else if (name == "single_jump") {
    model = cpp_model(point_masses({{Eigen::Vector2d(1.0, 1.0), 1.0}}));
    model.jumps.label = "single_jump";
  } else {
    throw std::invalid_argument("unknown model '" + full_name + "'");
  }
  if (brownian) model.sigma = Eigen::Matrix2d::Identity();
  model.label = full_name;
  validate(model);
  return model;
}

std::vector<std::string> model_names() {
  return {"nu0.5", "beta_family:<beta>", "beta_two", "cpp_log_density", "single_jump"};
}

LevyModelSpec model_from_json(const std::string& text) {
  return model_from_object(json::parse(text));
}

std::string model_to_json(const LevyModelSpec& model) { return model_object(model).dump(2); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

LevyModelSpec load_model(const std::string& name_or_path) {
  if (std::filesystem::is_regular_file(name_or_path))
    return model_from_json(read_text(name_or_path));
  return model_from_name(name_or_path);
}

ExperimentConfig experiment_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig cfg = j.contains("preset")
                             ? experiment_preset(j.at("preset").get<std::string>())
                             : ExperimentConfig{};
  if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
  if (j.contains("model")) cfg.model = model_from_value(j.at("model"));
  if (j.contains("n_ladder")) cfg.n_ladder = j.at("n_ladder").get<std::vector<long>>();
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("regime")) cfg.regime = regime_from_string(j.at("regime").get<std::string>());
  if (j.contains("h_mult")) cfg.h_mult = j.at("h_mult").get<double>();
  if (j.contains("grid_points")) cfg.grid_points = j.at("grid_points").get<int>();
  if (j.contains("x_max")) cfg.x_max = j.at("x_max").get<double>();
  if (j.contains("floor_mult")) cfg.floor_mult = j.at("floor_mult").get<double>();
  if (j.contains("delta_mult")) cfg.delta_mult = j.at("delta_mult").get<double>();
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("eval must be [lo, hi]");
    cfg.eval_lo = e[0].get<double>();
    cfg.eval_hi = e[1].get<double>();
  }
  if (j.contains("eval_points")) cfg.eval_points = j.at("eval_points").get<int>();
  if (j.contains("metric")) cfg.metric = metric_from_string(j.at("metric").get<std::string>());
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("bootstrap")) cfg.bootstrap = j.at("bootstrap").get<int>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  validate(cfg);
  return cfg;
}

std::string experiment_to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["model"] = model_object(cfg.model);
  j["n_ladder"] = cfg.n_ladder;
  j["replications"] = cfg.replications;
  j["master_seed"] = cfg.master_seed;
  j["regime"] = to_string(cfg.regime);
  j["h_mult"] = cfg.h_mult;
  j["grid_points"] = cfg.grid_points;
  j["x_max"] = cfg.x_max;
  j["floor_mult"] = cfg.floor_mult;
  j["delta_mult"] = cfg.delta_mult;
  j["eval"] = {cfg.eval_lo, cfg.eval_hi};
  j["eval_points"] = cfg.eval_points;
  j["metric"] = to_string(cfg.metric);
  j["epsilon"] = cfg.epsilon;
  j["bootstrap"] = cfg.bootstrap;
  j["workers"] = cfg.workers;
  return j.dump(2);
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return experiment_from_json(read_text(path));
}

void write_truth_csv(std::ostream& out, const LevyModelSpec& model, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& b) {
  const TruthTables truth = make_truth_tables(model);
  char buf[128];
  out << "# model: " << model.label << "\n";
  out << "a,b,U,U1_a,U2_b\n";
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double u1 = truth.U1(a(i));
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", a(i), b(j),
                    truth.U(a(i), b(j)), u1, truth.U2(b(j)));
      out << buf;
    }
  }
}

}  // namespace levycop
