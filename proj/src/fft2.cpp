#include "levycop/fft.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace levycop {

namespace {

// Eigen's FFT follows exp(-i...) for fwd and exp(+i...) for inv.
void transform_lines(Eigen::FFT<double>& engine, std::complex<double>* first,
                     Eigen::Index length, Eigen::Index count, Eigen::Index stride,
                     Eigen::Index step, int sign) {
  std::vector<std::complex<double>> in(length);
  std::vector<std::complex<double>> out(length);
  for (Eigen::Index c = 0; c < count; ++c) {
    std::complex<double>* line = first + c * step;
    for (Eigen::Index i = 0; i < length; ++i) in[i] = line[i * stride];
    if (sign < 0)
      engine.fwd(out.data(), in.data(), length);
    else
      engine.inv(out.data(), in.data(), length);
    for (Eigen::Index i = 0; i < length; ++i) line[i * stride] = out[i];
  }
}

}  // namespace

void fft2(Eigen::ArrayXXcd& data, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("fft2: sign must be +-1");
  Eigen::FFT<double> engine;
  engine.SetFlag(Eigen::FFT<double>::Unscaled);
  const Eigen::Index rows = data.rows();
  const Eigen::Index cols = data.cols();
  // Column-major storage: columns are contiguous.
  transform_lines(engine, data.data(), rows, cols, 1, rows, sign);
  transform_lines(engine, data.data(), cols, rows, rows, 1, sign);
}

int fast_fft_size(int n) {
  for (int m = std::max(n, 2);; ++m) {
    if (m % 2) continue;
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace levycop
