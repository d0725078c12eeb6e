#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sgx {

// Discretised unit torus with n sites per side, spacing eps = 1/n.
// Site (i,j) sits at coordinates (i/n, j/n) and is stored row-major at
// index i*n + j; every coordinate conversion goes through these two maps.
class TorusLattice {
 public:
  explicit TorusLattice(int n);

  int n() const { return n_; }
  double epsilon() const { return 1.0 / n_; }
  int site_count() const { return n_ * n_; }

  int site_index(int i, int j) const { return i * n_ + j; }
  int row(int s) const { return s / n_; }
  int col(int s) const { return s % n_; }
  Eigen::Vector2d coords(int s) const {
    return {static_cast<double>(row(s)) / n_, static_cast<double>(col(s)) / n_};
  }

  // Fourier dual: mode q = mi*n + mj carries wave vector 2*pi*(fold(mi), fold(mj))
  // with fold(m) in (-n/2, n/2].  Mode count equals the site count.
  Eigen::Vector2d wave_vector(int q) const {
    return {2.0 * M_PI * fold(row(q)), 2.0 * M_PI * fold(col(q))};
  }
  int mode_partner(int q) const {  // index of -k
    return site_index((n_ - row(q)) % n_, (n_ - col(q)) % n_);
  }
  bool self_paired(int q) const { return mode_partner(q) == q; }

  // Fourier multiplier of -Laplacian at mode q: eps^-2 sum_i (2 - 2cos(eps k_i)).
  double laplacian_eigenvalue(int q) const;

  // Membership in the closed ball of radius r, by integer site offsets
  // (translation covariant by construction).
  bool offsets_in_ball(int di, int dj, double r) const {
    int a = wrap_abs(di), b = wrap_abs(dj);
    double da = static_cast<double>(a) / n_, db = static_cast<double>(b) / n_;
    return da * da + db * db <= r * r;
  }

 private:
  int fold(int m) const { return m <= n_ / 2 ? m : m - n_; }
  int wrap_abs(int d) const {
    int a = ((d % n_) + n_) % n_;
    return a <= n_ - a ? a : n_ - a;
  }
  int n_;
};

// Euclidean distance on the continuum torus (minimum over periodic images).
double torus_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& y);

// Fourier multiplier of the (negative) lattice Laplacian at wave vector k.
double laplacian_multiplier(const TorusLattice& lat, const Eigen::Vector2d& k);

// Closed ball Lambda_r(x): all sites within torus distance r of site x,
// x always included.  Sorted by site index.
std::vector<int> ball(const TorusLattice& lat, int site, double r);

}  // namespace sgx
