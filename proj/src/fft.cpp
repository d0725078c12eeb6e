#include "sgx/fft.hpp"

#include <unsupported/Eigen/FFT>
#include <vector>

#include "sgx/errors.hpp"

namespace sgx {

namespace {

// kissfft builds twiddle tables per plan; keep one engine per thread and
// length so repeated transforms reuse them
Eigen::FFT<double>& engine_for() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

void TorusFft::transform(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out,
                         bool inverse) const {
  const int n = n_;
  if (in.size() != static_cast<long>(n) * n) throw NumericalError("fft: size mismatch");
  out.resize(in.size());

  Eigen::FFT<double>& fft = engine_for();
  std::vector<std::complex<double>> line(n), spec(n);

  // rows (index j varies within a row)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) line[j] = in[i * n + j];
    if (inverse)
      fft.inv(spec, line);
    else
      fft.fwd(spec, line);
    for (int j = 0; j < n; ++j) out[i * n + j] = spec[j];
  }
  // columns
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) line[i] = out[i * n + j];
    if (inverse)
      fft.inv(spec, line);
    else
      fft.fwd(spec, line);
    for (int i = 0; i < n; ++i) out[i * n + j] = spec[i];
  }
}

void TorusFft::fwd(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out) const {
  transform(in, out, false);
}

void TorusFft::inv(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out) const {
  transform(in, out, true);
}

}  // namespace sgx
