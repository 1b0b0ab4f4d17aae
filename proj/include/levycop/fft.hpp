#pragma once

#include <Eigen/Core>

namespace levycop {

//! Unscaled 2-D DFT in place, sign -1 (forward) or +1 (backward):
//! X(k1,k2) = sum_m x(m1,m2) exp(sign * 2 pi i (k1 m1 / N1 + k2 m2 / N2)).
void fft2(Eigen::ArrayXXcd& data, int sign);

//! Smallest even integer >= n with no prime factors other than 2, 3, 5.
int fast_fft_size(int n);

}  // namespace levycop
