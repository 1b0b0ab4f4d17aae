#pragma once

#include <vector>

#include <Eigen/Core>

namespace levycop {

//! Type-1 non-uniform FFT by Gaussian gridding. For every column s of
//! `weights` returns the array
//!   F_s(k1, k2) = sum_t weights(t, s) exp(i (k1 x_t + k2 y_t)),
//! k1 in [-half1, half1], k2 in [-half2, half2], stored at (k1 + half1, k2 + half2).
std::vector<Eigen::ArrayXXcd> nufft_type1(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                          const Eigen::MatrixXcd& weights, int half1,
                                          int half2, int spread = 14);

}  // namespace levycop
