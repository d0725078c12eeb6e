#pragma once

#include <vector>

#include "sgx/field.hpp"

// r-local maxima, level sets, the centred extremal point process and the
// argmax correspondence maps.

namespace sgx::extremes {

// m_eps = (2 log(1/eps) - (3/4) log log(1/eps)) / sqrt(2 pi); needs eps < 1/e.
double centering(double epsilon);

// Default extraction radius r_eps = eps * log^2(1/eps)  (r_eps -> 0,
// r_eps/eps -> infinity).
double default_extraction_radius(double epsilon);

// All sites x with phi(x) >= phi(y) for every y in the closed ball
// Lambda_r(x).  Ties: among equal-valued candidates within r of each other
// only the first in (height desc, site index asc) order survives, so the
// result is deterministic and pairwise separated by more than r.
// Sorted by site index.
std::vector<int> local_maxima(const Field& phi, double r);

struct LevelSet {
  double lambda = 0.0;
  std::vector<int> sites;  // phi >= m_eps - lambda, sorted by index
};
LevelSet level_set(const Field& phi, double lambda, double m_eps);

struct ExtremalPoint {
  double x = 0.0, y = 0.0;  // continuum coordinates (multiples of eps)
  double h = 0.0;           // phi - m_eps
};

struct ExtremalProcessSample {
  std::vector<ExtremalPoint> points;
  double r = 0.0;
  double epsilon = 0.0;
  double m_eps = 0.0;
};
ExtremalProcessSample extremal_process(const Field& phi, double r);

// max - min of phi over a non-empty site set.
double oscillation(const Field& phi, const std::vector<int>& sites);

// Site of Lambda_radius(x) with maximal phi, smallest index on ties.
int argmax_map(const Field& phi, int site, double radius);

// Unordered pairs u,v of the level set with eps*r < |u-v| < 1/r (strict).
long intermediate_pair_count(const TorusLattice& lat, const LevelSet& set, double r);

}  // namespace sgx::extremes
