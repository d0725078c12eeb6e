#include "sgx/polchinski.hpp"

#include <algorithm>
#include <cmath>

#include "sgx/errors.hpp"
#include "sgx/rng.hpp"

namespace sgx::polchinski {

PotentialEstimator::PotentialEstimator(double t_, int mc_samples_, const SgParams& p)
    : t(t_), mc_samples(mc_samples_), params(p) {
  if (t < 0.0) throw ConfigError("PotentialEstimator: t must be >= 0");
  if (mc_samples < 1) throw ConfigError("PotentialEstimator: mc_samples must be >= 1");
}

double PotentialEstimator::characteristic_scale() const {
  return std::min(std::sqrt(t), 1.0 / std::sqrt(params.mass_sq));
}

double v0(const SgParams& params, const Field& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  return eps2 * params.vertex_coefficient() *
         (std::sqrt(params.beta) * phi.values).cos().sum();
}

Field grad_v0(const SgParams& params, const Field& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  double sb = std::sqrt(params.beta);
  Field g(phi.lattice);
  g.values = -eps2 * params.vertex_coefficient() * sb * (sb * phi.values).sin();
  return g;
}

std::vector<Field> convolution_draws(const PotentialEstimator& est, uint64_t seed) {
  spectral::SpectralMultiplier ct =
      spectral::heat_kernel_multiplier(est.params.lattice, est.params.mass_sq, est.t);
  std::vector<Field> draws;
  draws.reserve(est.mc_samples);
  for (int j = 0; j < est.mc_samples; ++j)
    draws.push_back(spectral::sample_field(
        ct, rng::derive_seed(seed, "vt-draw", static_cast<uint64_t>(j))));
  return draws;
}

namespace {

// shifted weights w_j = exp(-v0(phi + zeta_j) - shift), shift = min v0
struct Weights {
  Eigen::ArrayXd w;
  double shift;
  double mean;
};

Weights compute_weights(const SgParams& params, const Field& phi,
                        const std::vector<Field>& draws) {
  const int M = static_cast<int>(draws.size());
  Eigen::ArrayXd neg(M);
  Field shifted(phi.lattice);
  for (int j = 0; j < M; ++j) {
    shifted.values = phi.values + draws[j].values;
    neg[j] = -v0(params, shifted);
  }
  double shift = neg.maxCoeff();
  Weights out{(neg - shift).exp(), shift, 0.0};
  out.mean = out.w.mean();
  if (!std::isfinite(out.mean) || out.mean <= 0.0)
    throw NumericalError("estimate_vt: weight underflow, increase mc_samples");
  return out;
}

}  // namespace

ValueEstimate estimate_vt_with_draws(const PotentialEstimator& est, const Field& phi,
                                     const std::vector<Field>& draws) {
  if (est.params.z == 0.0) return {0.0, 0.0};
  Weights w = compute_weights(est.params, phi, draws);
  const double M = static_cast<double>(draws.size());
  double var = (w.w - w.mean).square().sum() / std::max(1.0, M - 1.0);
  // v = -(shift + log mean); delta method on the log
  return {-(w.shift + std::log(w.mean)), std::sqrt(var / M) / w.mean};
}

ValueEstimate estimate_vt(const PotentialEstimator& est, const Field& phi,
                          uint64_t seed) {
  if (est.params.z == 0.0) return {0.0, 0.0};
  return estimate_vt_with_draws(est, phi, convolution_draws(est, seed));
}

GradEstimate estimate_grad_vt_with_draws(const PotentialEstimator& est, const Field& phi,
                                         const std::vector<Field>& draws) {
  const int N = phi.size();
  GradEstimate out{Field(phi.lattice), Eigen::ArrayXd::Zero(N)};
  if (est.params.z == 0.0) return out;

  Weights w = compute_weights(est.params, phi, draws);
  const int M = static_cast<int>(draws.size());
  Eigen::ArrayXd omega = w.w / w.w.sum();

  std::vector<Eigen::ArrayXd> grads(M);
  Field shifted(phi.lattice);
  for (int j = 0; j < M; ++j) {
    shifted.values = phi.values + draws[j].values;
    grads[j] = grad_v0(est.params, shifted).values;
    out.gradient.values += omega[j] * grads[j];
  }
  for (int j = 0; j < M; ++j)
    out.std_error += omega[j] * omega[j] * (grads[j] - out.gradient.values).square();
  out.std_error = out.std_error.sqrt();
  return out;
}

GradEstimate estimate_grad_vt(const PotentialEstimator& est, const Field& phi,
                              uint64_t seed) {
  if (est.params.z == 0.0) return {Field(phi.lattice), Eigen::ArrayXd::Zero(phi.size())};
  return estimate_grad_vt_with_draws(est, phi, convolution_draws(est, seed));
}

namespace {

// one independent estimate of the flow-equation defect at (t, phi)
double residual_once(const PotentialEstimator& est, const Field& phi, double dt,
                     uint64_t seed) {
  const SgParams& p = est.params;
  const TorusLattice& lat = p.lattice;
  const int M = est.mc_samples;
  double eps2 = lat.epsilon() * lat.epsilon();
  double sb = std::sqrt(p.beta);

  // common standard noise across the three convolution scales
  std::vector<spectral::SpectralNoise> noises;
  noises.reserve(M);
  for (int j = 0; j < M; ++j)
    noises.push_back(spectral::sample_noise(
        lat, rng::derive_seed(seed, "residual-draw", static_cast<uint64_t>(j))));

  auto value_at = [&](double t) {
    spectral::SpectralMultiplier ct = spectral::heat_kernel_multiplier(lat, p.mass_sq, t);
    std::vector<Field> draws;
    draws.reserve(M);
    for (int j = 0; j < M; ++j) draws.push_back(spectral::synthesize(noises[j], ct));
    return estimate_vt_with_draws(est, phi, draws).value;
  };
  double dvdt = (value_at(est.t + dt) - value_at(est.t - dt)) / (2.0 * dt);

  // weighted moments at t
  spectral::SpectralMultiplier ct = spectral::heat_kernel_multiplier(lat, p.mass_sq, est.t);
  spectral::SpectralMultiplier cdot = spectral::heat_rate_multiplier(lat, p.mass_sq, est.t);
  double n2 = static_cast<double>(lat.n()) * lat.n();
  Eigen::ArrayXd kdot_matrix_eigs = cdot.values * n2;
  double kdot_diag = cdot.values.sum();  // Kdot(x,x), same at every site

  Eigen::ArrayXd neg(M);
  std::vector<Eigen::ArrayXd> grads(M);
  Field shifted(phi.lattice);
  Eigen::ArrayXd dsum(M);  // sum_x d^2 v0/dphi(x)^2 at each draw
  for (int j = 0; j < M; ++j) {
    shifted.values = phi.values + spectral::synthesize(noises[j], ct).values;
    neg[j] = -v0(p, shifted);
    grads[j] = grad_v0(p, shifted).values;
    dsum[j] = (-eps2 * p.vertex_coefficient() * p.beta) * (sb * shifted.values).cos().sum();
  }
  Eigen::ArrayXd omega = (neg - neg.maxCoeff()).exp();
  omega /= omega.sum();

  Field ubar(phi.lattice);
  double trace_term = 0.0, uku_mean = 0.0;
  for (int j = 0; j < M; ++j) {
    ubar.values += omega[j] * grads[j];
    trace_term += omega[j] * dsum[j];
    Field uj(phi.lattice, grads[j]);
    uku_mean += omega[j] * spectral::quadratic_form(uj, kdot_matrix_eigs);
  }
  double uku_bar = spectral::quadratic_form(ubar, kdot_matrix_eigs);
  double lap_term = kdot_diag * trace_term - (uku_mean - uku_bar);
  return dvdt - 0.5 * lap_term + 0.5 * uku_bar;
}

}  // namespace

ResidualEstimate polchinski_residual(const PotentialEstimator& est, const Field& phi,
                                     double dt, uint64_t seed, int replicates,
                                     double error_ceiling) {
  if (!(est.t > dt && dt > 0.0))
    throw ConfigError("polchinski_residual: need t > dt > 0");
  if (est.params.z == 0.0) return {0.0, 0.0, true};
  Eigen::ArrayXd vals(replicates);
  for (int r = 0; r < replicates; ++r)
    vals[r] = residual_once(est, phi, dt,
                            rng::derive_seed(seed, "residual-rep", static_cast<uint64_t>(r)));
  double mean = vals.mean();
  double se = replicates > 1
                  ? std::sqrt((vals - mean).square().sum() /
                              (replicates * (replicates - 1.0)))
                  : 0.0;
  return {mean, se, se <= error_ceiling};
}

double default_initial_time(const SgParams& params, double tail_tol) {
  double drift_sup = std::fabs(params.vertex_coefficient()) * std::sqrt(params.beta);
  if (drift_sup <= 0.0) return 1.0;
  double T = std::log(drift_sup / (params.mass_sq * tail_tol)) / params.mass_sq;
  return std::max(T, 1.0);
}

namespace {

std::vector<double> build_grid(double T, double stop_time, const FlowOptions& opt,
                               const std::vector<double>& marks) {
  std::vector<double> grid;
  double t = T;
  double floor = std::max(stop_time, opt.t_floor);
  while (t > floor) {
    grid.push_back(t);
    t -= std::min(opt.dt, std::max(opt.rel * t, 1e-12));
  }
  grid.push_back(floor);
  if (stop_time < opt.t_floor) grid.push_back(stop_time);
  for (double s : marks)
    if (s > stop_time && s < T) grid.push_back(s);
  std::sort(grid.begin(), grid.end(), std::greater<double>());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
             grid.end());
  return grid;
}

}  // namespace

CoupledPath backward_flow(const SgParams& params, const FlowOptions& options,
                          std::vector<double> s_marks, uint64_t seed, double stop_time) {
  const TorusLattice& lat = params.lattice;
  std::sort(s_marks.begin(), s_marks.end(), std::greater<double>());

  CoupledPath path{std::move(s_marks), {}, {}, {}, {}, {},
                   Field(lat), Field(lat), Field(lat), 0.0, 0.0, 0};
  double T = options.T > 0.0 ? options.T : default_initial_time(params, options.tail_tol);
  path.initial_time = T;
  path.tail_bound = std::fabs(params.vertex_coefficient()) * std::sqrt(params.beta) *
                    std::exp(-params.mass_sq * T) / params.mass_sq;

  for (double s : path.s_marks)
    if (s >= T) throw ConfigError("backward_flow: s_marks must lie below T");
  if (T <= std::max(stop_time, options.t_floor) || options.dt <= 0.0 ||
      options.rel <= 0.0 || options.rel >= 1.0)
    throw ConfigError("backward_flow: need T > max(stop_time, t_floor), dt > 0, rel in (0,1)");

  std::vector<double> grid = build_grid(T, stop_time, options, path.s_marks);

  Field sg = spectral::sample_field(spectral::gff_multiplier(lat, params.mass_sq, T),
                                    rng::derive_seed(seed, "flow-init"));
  Field gff = sg;

  const size_t n_marks = path.s_marks.size();
  path.remainder.assign(n_marks, Field(lat));
  path.remainder_bound.assign(n_marks, 0.0);

  auto snapshot = [&](size_t m) {
    path.phi_sg.push_back(sg);
    path.phi_gff.push_back(gff);
    Field delta(lat);
    delta.values = sg.values - gff.values;
    path.phi_delta.push_back(delta);
    (void)m;
  };
  // marks are descending, so snapshots fill in order
  std::vector<bool> marked(n_marks, false);

  for (size_t j = 0; j + 1 < grid.size(); ++j) {
    double t = grid[j], t_next = grid[j + 1];
    double step = t - t_next;
    ++path.steps;

    if (params.z != 0.0) {
      Field grad(lat);
      if (t > options.t_floor) {
        PotentialEstimator est(t, options.mc_samples, params);
        grad = estimate_grad_vt(est, sg,
                                rng::derive_seed(seed, "flow-drift", static_cast<uint64_t>(j)))
                   .gradient;
      } else {
        grad = grad_v0(params, sg);
      }
      spectral::SpectralMultiplier cdot =
          spectral::heat_rate_multiplier(lat, params.mass_sq, t);
      Field drift = spectral::apply_covariance_kernel(grad, cdot);
      sg.values -= step * drift.values;

      double drift_max = drift.values.abs().maxCoeff();
      for (size_t m = 0; m < n_marks; ++m) {
        if (t <= path.s_marks[m] + 1e-12) {
          path.remainder[m].values += step * drift.values;
          path.remainder_bound[m] += step * drift_max;
        }
      }
    }

    // exact Gaussian increment with covariance c_t - c_{t_next}
    spectral::SpectralMultiplier inc = spectral::heat_kernel_multiplier(lat, params.mass_sq, t);
    spectral::SpectralMultiplier low =
        spectral::heat_kernel_multiplier(lat, params.mass_sq, t_next);
    inc.values = (inc.values - low.values).max(0.0);
    inc.label = "flow-increment";
    Field dgff = spectral::synthesize(
        spectral::sample_noise(lat, rng::derive_seed(seed, "flow-incr", static_cast<uint64_t>(j))),
        inc);
    sg.values += dgff.values;
    gff.values += dgff.values;

    if (!sg.values.allFinite()) throw NumericalError("backward_flow: non-finite field");

    for (size_t m = 0; m < n_marks; ++m) {
      if (!marked[m] && t_next <= path.s_marks[m] + 1e-12) {
        marked[m] = true;
        snapshot(m);
      }
    }
  }

  path.phi_sg_0 = sg;
  path.phi_gff_0 = gff;
  path.phi_delta_0.values = sg.values - gff.values;
  return path;
}

std::vector<RemainderRow> remainder_decay_report(const CoupledPath& path) {
  std::vector<RemainderRow> rows;
  for (size_t m = 0; m < path.s_marks.size(); ++m) {
    RemainderRow row;
    row.s = path.s_marks[m];
    row.max_abs = path.remainder[m].values.abs().maxCoeff();
    row.sup_bound = path.remainder_bound[m];
    rows.push_back(row);
  }
  return rows;
}

AuxiliaryField auxiliary_field(const SgParams& params, double s,
                               const FlowOptions& options, uint64_t seed) {
  if (s <= 0.0) throw ConfigError("auxiliary_field: s must be > 0");
  const TorusLattice& lat = params.lattice;
  Field x_gff = spectral::sample_field(
      spectral::massive_gff_multiplier(lat, params.mass_sq, s),
      rng::derive_seed(seed, "aux-xgff"));
  Field x_h = spectral::sample_field(spectral::gs_multiplier(lat, params.mass_sq, s),
                                     rng::derive_seed(seed, "aux-xh"));
  CoupledPath path =
      backward_flow(params, options, {}, rng::derive_seed(seed, "aux-flow"), s);
  AuxiliaryField out{Field(lat), std::move(x_gff), std::move(x_h),
                     std::move(path.phi_sg_0)};
  out.psi.values = out.x_gff.values + out.x_h.values + out.phi_s_sg.values;
  return out;
}

}  // namespace sgx::polchinski
