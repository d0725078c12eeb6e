#pragma once

#include <Eigen/Dense>

#include "sgx/lattice.hpp"

namespace sgx {

// One real-valued configuration phi: lattice sites -> R, row-major.
struct Field {
  TorusLattice lattice;
  Eigen::ArrayXd values;

  explicit Field(const TorusLattice& lat)
      : lattice(lat), values(Eigen::ArrayXd::Zero(lat.site_count())) {}
  Field(const TorusLattice& lat, Eigen::ArrayXd v) : lattice(lat), values(std::move(v)) {}

  double operator()(int i, int j) const { return values[lattice.site_index(i, j)]; }
  double& operator()(int i, int j) { return values[lattice.site_index(i, j)]; }
  int size() const { return lattice.site_count(); }
};

}  // namespace sgx
