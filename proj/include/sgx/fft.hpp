#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sgx/lattice.hpp"

namespace sgx {

// 2D DFT on the n x n torus, row-major arrays of length n^2.
//
// Convention (fixed project-wide):
//   fwd:  F(m) = sum_x f(x) exp(-2*pi*i m.x_int / n)          (no scaling)
//   inv:  f(x) = (1/n^2) sum_m F(m) exp(+2*pi*i m.x_int / n)
// so a field phi(x) = sum_k chat(k)^(1/2) X(k) e^{ikx} is n^2 * inv(sqrt(chat) .* X).
class TorusFft {
 public:
  explicit TorusFft(int n) : n_(n) {}

  void fwd(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out) const;
  void inv(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out) const;

  Eigen::ArrayXcd fwd(const Eigen::ArrayXcd& in) const {
    Eigen::ArrayXcd out(in.size());
    fwd(in, out);
    return out;
  }
  Eigen::ArrayXcd inv(const Eigen::ArrayXcd& in) const {
    Eigen::ArrayXcd out(in.size());
    inv(in, out);
    return out;
  }

  int n() const { return n_; }

 private:
  void transform(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out, bool inverse) const;
  int n_;
};

}  // namespace sgx
