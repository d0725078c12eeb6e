#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sgx/field.hpp"
#include "sgx/sinegordon.hpp"

// Tiny-lattice oracles by dense linear algebra and tensor-product
// Gauss-Hermite quadrature.  Everything here is built from the stencil matrix
// and eigen-decompositions, deliberately sharing no code with the spectral /
// Monte Carlo paths it is used to check.  Practical up to ~5 sites per
// quadrature dimension; the intended use is n = 2 (four sites).

namespace sgx::quadrature {

struct GaussHermite {
  Eigen::ArrayXd nodes;    // of weight e^{-x^2}
  Eigen::ArrayXd weights;
};
GaussHermite gauss_hermite(int count);

// Site matrix of -Laplacian, assembled from the 4-neighbour stencil.
Eigen::MatrixXd dense_minus_laplacian(const TorusLattice& lat);

// Covariance matrices K(x,y) (the kernel convention: matrix eigenvalue is
// n^2 * multiplier) obtained as matrix functions of the stencil Laplacian.
Eigen::MatrixXd dense_covariance(const TorusLattice& lat, double mass_sq,
                                 const std::function<double(double mu)>& of_mu);
Eigen::MatrixXd dense_gff_covariance(const TorusLattice& lat, double mass_sq);
Eigen::MatrixXd dense_heat_covariance(const TorusLattice& lat, double mass_sq, double t);
Eigen::MatrixXd dense_heat_rate_covariance(const TorusLattice& lat, double mass_sq,
                                           double t);

// Tensor-product GH sweep over N(0, cov): calls visit(phi, weight) for every
// node tuple; weights sum to 1.
void gaussian_sweep(const Eigen::MatrixXd& cov, int nodes_per_dim,
                    const std::function<void(const Eigen::VectorXd&, double)>& visit);

// E[phi(0)^2] and E[cos(sqrt(beta) phi(0))] under the sine-Gordon measure.
struct SgMoments {
  double phi0_sq = 0.0;
  double cos_phi0 = 0.0;
};
SgMoments sg_moments(const SgParams& params, int nodes_per_dim);

// Renormalised potential and its gradient by quadrature over N(0, c_t).
double vt(const SgParams& params, double t, const Eigen::VectorXd& phi, int nodes_per_dim);
Eigen::VectorXd grad_vt(const SgParams& params, double t, const Eigen::VectorXd& phi,
                        int nodes_per_dim);

// Flow-equation defect d/dt v - (1/2) Lap_{cdot} v + (1/2) (grad v)^2_{cdot}
// at phi, with a central difference of width dt in t.
double polchinski_residual(const SgParams& params, double t, const Eigen::VectorXd& phi,
                           double dt, int nodes_per_dim);

}  // namespace sgx::quadrature
