#pragma once

#include <vector>

#include "sgx/field.hpp"
#include "sgx/sinegordon.hpp"
#include "sgx/spectral.hpp"

// Renormalised potential v_t by nested Monte Carlo, the flow-equation
// residual check, and the backward coupling flow that produces the pair
// (Phi_t^SG, Phi_t^GFF) on shared noise.
//
// v_t(phi) = -log E[exp(-v0(phi + zeta))], zeta ~ N(0, c_t); gradients are in
// plain coordinates phi(x) (eps^2 site weight explicit, as in grad_energy),
// and the drift applies the cdot_t covariance kernel to them.

namespace sgx::polchinski {

struct PotentialEstimator {
  double t = 0.1;
  int mc_samples = 256;
  SgParams params;

  PotentialEstimator(double t_, int mc_samples_, const SgParams& p);

  // L_t = min(sqrt(t), 1/m), the scale below which c_t fluctuations live
  double characteristic_scale() const;
};

// Microscopic potential eps^2 sum_x 2 z eps^{-beta/4pi} cos(sqrt(beta) phi(x)).
double v0(const SgParams& params, const Field& phi);
Field grad_v0(const SgParams& params, const Field& phi);

// zeta_j ~ N(0, c_t), j < mc_samples, derived deterministically from seed.
std::vector<Field> convolution_draws(const PotentialEstimator& est, uint64_t seed);

struct ValueEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
ValueEstimate estimate_vt(const PotentialEstimator& est, const Field& phi, uint64_t seed);
ValueEstimate estimate_vt_with_draws(const PotentialEstimator& est, const Field& phi,
                                     const std::vector<Field>& draws);

struct GradEstimate {
  Field gradient;
  Eigen::ArrayXd std_error;  // per site, self-normalised importance sampling
};
GradEstimate estimate_grad_vt(const PotentialEstimator& est, const Field& phi,
                              uint64_t seed);
GradEstimate estimate_grad_vt_with_draws(const PotentialEstimator& est, const Field& phi,
                                         const std::vector<Field>& draws);

struct ResidualEstimate {
  double residual = 0.0;
  double error_bar = 0.0;
  bool conclusive = true;  // false when the error bar exceeds the ceiling
};
// d/dt v_t - (1/2) Lap_{cdot} v_t + (1/2) (grad v_t)^2_{cdot} at phi, averaged
// over `replicates` independent estimates; dt is the central-difference width.
ResidualEstimate polchinski_residual(const PotentialEstimator& est, const Field& phi,
                                     double dt, uint64_t seed, int replicates = 16,
                                     double error_ceiling = 1e-2);

struct FlowOptions {
  double T = 0.0;          // initial time; 0 selects the tail-tolerance default
  double dt = 0.01;        // maximum step
  double rel = 0.05;       // relative step near t = 0 (geometric refinement)
  double t_floor = 1e-4;   // below this the bare gradient is used for the last step
  double tail_tol = 1e-6;  // sup-norm tolerance for the neglected t > T drift
  int mc_samples = 256;    // draws per drift estimate
};

// Initial time at which the neglected drift tail int_T^inf ||cdot grad v|| dt
// drops below tail_tol.
double default_initial_time(const SgParams& params, double tail_tol);

struct CoupledPath {
  std::vector<double> s_marks;  // descending
  std::vector<Field> phi_sg;    // one per mark, plus the t=0 entries below
  std::vector<Field> phi_gff;
  std::vector<Field> phi_delta;
  std::vector<Field> remainder;          // R_s accumulated over steps with t <= s
  std::vector<double> remainder_bound;   // sum of dt * max|drift| over the same steps
  Field phi_sg_0, phi_gff_0, phi_delta_0;
  double initial_time = 0.0;
  double tail_bound = 0.0;
  long steps = 0;
};

// Euler-Maruyama integration of the coupling SDE downward from T, both fields
// driven by the same exact Gaussian increments (covariance c_t - c_{t-dt}).
// stop_time > 0 ends the integration early (the t=0 snapshots then hold the
// stop_time fields).
CoupledPath backward_flow(const SgParams& params, const FlowOptions& options,
                          std::vector<double> s_marks, uint64_t seed,
                          double stop_time = 0.0);

struct RemainderRow {
  double s = 0.0;
  double max_abs = 0.0;   // max_x |R_s|
  double sup_bound = 0.0; // integrator bookkeeping bound
};
std::vector<RemainderRow> remainder_decay_report(const CoupledPath& path);

struct AuxiliaryField {
  Field psi;       // X_s^GFF + X_s^h + Phi_s^SG
  Field x_gff;     // mass m^2 + 1/s
  Field x_h;       // covariance g_s
  Field phi_s_sg;  // backward flow stopped at t = s
};
AuxiliaryField auxiliary_field(const SgParams& params, double s,
                               const FlowOptions& options, uint64_t seed);

}  // namespace sgx::polchinski
