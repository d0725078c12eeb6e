#include "sgx/sinegordon.hpp"

#include <cmath>

#include "sgx/errors.hpp"
#include "sgx/fft.hpp"
#include "sgx/rng.hpp"
#include "sgx/spectral.hpp"

namespace sgx {

SgParams::SgParams(double z_, double beta_, double mass_sq_, const TorusLattice& lat)
    : z(z_), beta(beta_), mass_sq(mass_sq_), lattice(lat) {
  if (beta <= 0.0 || beta >= 6.0 * M_PI)
    throw ConfigError("beta out of range (0, 6*pi)");
  if (mass_sq <= 0.0) throw ConfigError("mass_sq must be > 0");
}

double SgParams::vertex_coefficient() const {
  return 2.0 * z * std::pow(lattice.epsilon(), -beta / (4.0 * M_PI));
}

Field minus_laplacian(const Field& phi) {
  const TorusLattice& lat = phi.lattice;
  const int n = lat.n();
  Field out(lat);
  double eps_m2 = static_cast<double>(n) * n;  // eps^{-2}
  for (int i = 0; i < n; ++i) {
    int iu = (i + 1) % n, id = (i + n - 1) % n;
    for (int j = 0; j < n; ++j) {
      int jr = (j + 1) % n, jl = (j + n - 1) % n;
      double c = phi(i, j);
      out(i, j) = eps_m2 * (4.0 * c - phi(iu, j) - phi(id, j) - phi(i, jr) - phi(i, jl));
    }
  }
  return out;
}

double energy(const SgParams& params, const Field& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  Field lap = minus_laplacian(phi);
  double sqrt_beta = std::sqrt(params.beta);
  double quad = 0.5 * (phi.values * lap.values).sum() +
                0.5 * params.mass_sq * phi.values.square().sum();
  double vertex = params.vertex_coefficient() * (sqrt_beta * phi.values).cos().sum();
  return eps2 * (quad + vertex);
}

Field grad_energy(const SgParams& params, const Field& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  double sqrt_beta = std::sqrt(params.beta);
  Field lap = minus_laplacian(phi);
  Field out(phi.lattice);
  out.values = eps2 * (lap.values + params.mass_sq * phi.values -
                       params.vertex_coefficient() * sqrt_beta *
                           (sqrt_beta * phi.values).sin());
  return out;
}

ObservableSuite observable_suite(const SgParams& params, const Field& phi) {
  ObservableSuite o;
  o.mean = phi.values.mean();
  double n = static_cast<double>(phi.size());
  o.variance = (phi.values - o.mean).square().sum() / std::max(1.0, n - 1.0);
  o.mean_cos = (std::sqrt(params.beta) * phi.values).cos().mean();
  o.max = phi.values.maxCoeff();
  return o;
}

double integrated_autocorrelation_time(const std::vector<double>& series) {
  const long n = static_cast<long>(series.size());
  if (n < 4) return 0.5;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) return 0.5;
  // convention: var(mean) = 2 tau sigma^2 / N, so an iid series has tau = 1/2
  double tau = 0.5;
  for (long t = 1; t < n / 2; ++t) {
    double c = 0.0;
    for (long i = 0; i + t < n; ++i) c += (series[i] - mean) * (series[i + t] - mean);
    c /= (n - t) * var;
    tau += c;
    if (t >= 10.0 * tau) break;  // Sokal window
  }
  return std::max(tau, 0.5);
}

namespace {

struct MalaState {
  Field phi;
  double H;
  Field pgrad;  // P grad H(phi)
};

struct MalaMachine {
  const SgParams& params;
  spectral::SpectralMultiplier precond;  // chat = 1/(lambda + m^2)
  Eigen::ArrayXd a_eig;                  // eps^2 (lambda + m^2), matrix eigenvalues

  explicit MalaMachine(const SgParams& p)
      : params(p), precond(spectral::gff_multiplier(p.lattice, p.mass_sq, 0.0)),
        a_eig(p.lattice.site_count()) {
    double eps2 = p.lattice.epsilon() * p.lattice.epsilon();
    for (int q = 0; q < p.lattice.site_count(); ++q)
      a_eig[q] = eps2 * (p.lattice.laplacian_eigenvalue(q) + p.mass_sq);
  }

  MalaState make_state(Field phi) const {
    double H = energy(params, phi);
    if (!std::isfinite(H)) throw NumericalError("mala: non-finite energy");
    Field g = grad_energy(params, phi);
    Field pg = spectral::apply_covariance_kernel(g, precond);
    return {std::move(phi), H, std::move(pg)};
  }

  // log q(to | from) up to the h-dependent constant (cancels in the ratio)
  double log_q(const MalaState& from, const Field& to, double h) const {
    Field diff(to.lattice);
    diff.values = to.values - (from.phi.values - 0.5 * h * from.pgrad.values);
    return -spectral::quadratic_form(diff, a_eig) / (2.0 * h);
  }
};

}  // namespace

double mala_log_ratio(const SgParams& params, const Field& from, const Field& to,
                      double h) {
  MalaMachine m(params);
  MalaState sf = m.make_state(from);
  MalaState st = m.make_state(to);
  return (-st.H + m.log_q(st, from, h)) - (-sf.H + m.log_q(sf, to, h));
}

ChainDiagnostics mala_run(const SgParams& params, const MalaOptions& options,
                          uint64_t seed,
                          const std::function<void(const Field&)>& on_sample) {
  if (options.step_size <= 0.0) throw ConfigError("mala: step_size must be > 0");
  if (options.n_samples < 1) throw ConfigError("mala: n_samples must be >= 1");

  MalaMachine machine(params);
  uint64_t noise_seed = rng::derive_seed(seed, "mala-noise");
  const uint64_t accept_stream = rng::fnv1a64("mala-accept");
  uint64_t accept_seed = rng::derive_seed(seed, "mala-accept");

  MalaState state = machine.make_state(Field(params.lattice));  // cold start
  double h = options.step_size;
  const double target = 0.574;

  long total_steps = options.burn_in + static_cast<long>(options.n_samples) * options.thin;
  long accepted_measure = 0, measure_steps = 0, kept = 0;
  std::vector<double> mean_series;
  mean_series.reserve(std::max<long>(0, total_steps - options.burn_in));

  for (long step = 0; step < total_steps; ++step) {
    spectral::SpectralNoise xi_noise = spectral::sample_noise(
        params.lattice, rng::derive_seed(noise_seed, "step", static_cast<uint64_t>(step)));
    Field xi = spectral::synthesize(xi_noise, machine.precond);

    Field proposal(params.lattice);
    proposal.values =
        state.phi.values - 0.5 * h * state.pgrad.values + std::sqrt(h) * xi.values;
    MalaState next = machine.make_state(std::move(proposal));

    // forward displacement is sqrt(h) xi, whose A-norm is sum_k |X(k)|^2
    double fwd_norm = xi_noise.coefficients.abs2().sum() * h;
    double log_q_fwd = -fwd_norm / (2.0 * h);
    double log_q_bwd = machine.log_q(next, state.phi, h);
    double log_alpha = (state.H - next.H) + log_q_bwd - log_q_fwd;

    auto block = rng::block_at(accept_seed, accept_stream, static_cast<uint64_t>(step));
    double u = rng::u64_to_unit((static_cast<uint64_t>(block[0]) << 32) | block[1]);
    bool accept = std::log(u) < log_alpha;
    if (accept) state = std::move(next);

    bool in_burn = step < options.burn_in;
    if (in_burn && options.tune) {
      double rate = std::min(1.0, std::exp(log_alpha));
      double gamma = 0.66 / std::pow(1.0 + step, 0.6);
      h *= std::exp(gamma * (rate - target));
    }
    if (!in_burn) {
      ++measure_steps;
      if (accept) ++accepted_measure;
      mean_series.push_back(state.phi.values.mean());
      long offset = step - options.burn_in;
      if ((offset + 1) % options.thin == 0 && kept < options.n_samples) {
        on_sample(state.phi);
        ++kept;
      }
    }
  }

  ChainDiagnostics diag;
  diag.acceptance_rate =
      measure_steps > 0 ? static_cast<double>(accepted_measure) / measure_steps : 0.0;
  diag.autocorrelation_time = integrated_autocorrelation_time(mean_series);
  diag.samples_kept = kept;
  diag.step_size = h;
  if (diag.acceptance_rate < 0.1 || diag.acceptance_rate > 0.9)
    diag.warning = "acceptance rate outside [0.1, 0.9]";
  return diag;
}

MalaResult mala_chain(const SgParams& params, const MalaOptions& options, uint64_t seed) {
  MalaResult result;
  result.samples.reserve(options.n_samples);
  result.diagnostics = mala_run(params, options, seed,
                                [&](const Field& f) { result.samples.push_back(f); });
  return result;
}

}  // namespace sgx
