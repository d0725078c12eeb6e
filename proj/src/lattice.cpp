#include "sgx/lattice.hpp"

#include <cmath>

#include "sgx/errors.hpp"

namespace sgx {

TorusLattice::TorusLattice(int n) : n_(n) {
  if (n < 2) throw ConfigError("lattice size must satisfy n >= 2");
}

double TorusLattice::laplacian_eigenvalue(int q) const {
  // cos(eps*k_i) = cos(2*pi*m_i/n); folding m is immaterial mod n
  double c1 = std::cos(2.0 * M_PI * row(q) / n_);
  double c2 = std::cos(2.0 * M_PI * col(q) / n_);
  double eps2 = 1.0 / (static_cast<double>(n_) * n_);
  return ((2.0 - 2.0 * c1) + (2.0 - 2.0 * c2)) / eps2;
}

double torus_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
  double best = 0.0;
  for (int c = 0; c < 2; ++c) {
    double d = std::fabs(x[c] - y[c]);
    d = std::min(d, 1.0 - d);
    best += d * d;
  }
  return std::sqrt(best);
}

double laplacian_multiplier(const TorusLattice& lat, const Eigen::Vector2d& k) {
  double eps = lat.epsilon();
  double s = (2.0 - 2.0 * std::cos(eps * k[0])) + (2.0 - 2.0 * std::cos(eps * k[1]));
  return s / (eps * eps);
}

std::vector<int> ball(const TorusLattice& lat, int site, double r) {
  std::vector<int> out;
  int n = lat.n();
  int i0 = lat.row(site), j0 = lat.col(site);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lat.offsets_in_ball(i - i0, j - j0, r)) out.push_back(lat.site_index(i, j));
  return out;
}

}  // namespace sgx
