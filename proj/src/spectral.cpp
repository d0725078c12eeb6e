#include "sgx/spectral.hpp"

#include <cmath>

#include "sgx/errors.hpp"
#include "sgx/fft.hpp"
#include "sgx/rng.hpp"

namespace sgx::spectral {

namespace {

const uint64_t kNoiseStream = rng::fnv1a64("spectral-noise");

SpectralMultiplier from_scalar(const TorusLattice& lat, std::string label,
                               double (*f)(double lambda, double a, double b), double a,
                               double b) {
  SpectralMultiplier m{lat, Eigen::ArrayXd(lat.site_count()), std::move(label)};
  for (int q = 0; q < lat.site_count(); ++q)
    m.values[q] = f(lat.laplacian_eigenvalue(q), a, b);
  return m;
}

}  // namespace

SpectralNoise sample_noise(const TorusLattice& lat, uint64_t seed) {
  const int N = lat.site_count();
  SpectralNoise noise{lat, Eigen::ArrayXcd(N), seed};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int q = 0; q < N; ++q) {
    int p = lat.mode_partner(q);
    if (q > p) continue;  // filled below by the partner
    rng::NormalPair z = rng::normal_pair(seed, kNoiseStream, static_cast<uint64_t>(q));
    if (q == p) {
      noise.coefficients[q] = std::complex<double>(z.z0, 0.0);
    } else {
      std::complex<double> x(z.z0 * inv_sqrt2, z.z1 * inv_sqrt2);
      noise.coefficients[q] = x;
      noise.coefficients[p] = std::conj(x);
    }
  }
  return noise;
}

SpectralMultiplier gff_multiplier(const TorusLattice& lat, double mass_sq, double t) {
  if (mass_sq <= 0.0) throw ConfigError("gff_multiplier: mass_sq must be > 0");
  if (t < 0.0) throw ConfigError("gff_multiplier: t must be >= 0");
  return from_scalar(
      lat, "gff[m2=" + std::to_string(mass_sq) + ",t=" + std::to_string(t) + "]",
      [](double lam, double m2, double t_) {
        double mu = lam + m2;
        return std::exp(-t_ * mu) / mu;
      },
      mass_sq, t);
}

SpectralMultiplier heat_kernel_multiplier(const TorusLattice& lat, double mass_sq,
                                          double t) {
  if (t < 0.0) throw ConfigError("heat_kernel_multiplier: t must be >= 0");
  return from_scalar(
      lat, "heat_ct[m2=" + std::to_string(mass_sq) + ",t=" + std::to_string(t) + "]",
      [](double lam, double m2, double t_) {
        double mu = lam + m2;
        return -std::expm1(-t_ * mu) / mu;
      },
      mass_sq, t);
}

SpectralMultiplier heat_rate_multiplier(const TorusLattice& lat, double mass_sq,
                                        double t) {
  if (t < 0.0) throw ConfigError("heat_rate_multiplier: t must be >= 0");
  return from_scalar(
      lat, "heat_cdot[m2=" + std::to_string(mass_sq) + ",t=" + std::to_string(t) + "]",
      [](double lam, double m2, double t_) { return std::exp(-t_ * (lam + m2)); },
      mass_sq, t);
}

double gs_scalar(double mu, double s) {
  double x = mu * s;
  if (x < 1e-4) {
    // series of (1-e^{-x})/x - 1/(1+x), scaled by s; direct evaluation
    // cancels catastrophically here
    return s * x * (0.5 + x * (-5.0 / 6.0 + x * (23.0 / 24.0 - x * 119.0 / 120.0)));
  }
  return -std::expm1(-x) / mu - 1.0 / (mu + 1.0 / s);
}

SpectralMultiplier gs_multiplier(const TorusLattice& lat, double mass_sq, double s) {
  if (s <= 0.0) throw ConfigError("gs_multiplier: s must be > 0");
  return from_scalar(
      lat, "gs[m2=" + std::to_string(mass_sq) + ",s=" + std::to_string(s) + "]",
      [](double lam, double m2, double s_) { return gs_scalar(lam + m2, s_); }, mass_sq,
      s);
}

SpectralMultiplier massive_gff_multiplier(const TorusLattice& lat, double mass_sq,
                                          double s) {
  if (s <= 0.0) throw ConfigError("massive_gff_multiplier: s must be > 0");
  return from_scalar(
      lat, "massive_gff[m2=" + std::to_string(mass_sq) + ",s=" + std::to_string(s) + "]",
      [](double lam, double m2, double s_) { return 1.0 / (lam + m2 + 1.0 / s_); },
      mass_sq, s);
}

namespace {

Eigen::ArrayXcd synthesis_spectrum(const SpectralNoise& noise,
                                   const SpectralMultiplier& mult) {
  if (noise.lattice.n() != mult.lattice.n())
    throw NumericalError("synthesize: noise and multiplier on different lattices");
  return noise.coefficients * mult.values.sqrt().cast<std::complex<double>>();
}

}  // namespace

Field synthesize(const SpectralNoise& noise, const SpectralMultiplier& mult) {
  const int n = noise.lattice.n();
  TorusFft fft(n);
  Eigen::ArrayXcd spec = synthesis_spectrum(noise, mult);
  Eigen::ArrayXcd site = fft.inv(spec);
  double scale = static_cast<double>(n) * n;  // inv carries 1/n^2
  return Field(noise.lattice, (site.real() * scale).eval());
}

double synthesis_imag_residual(const SpectralNoise& noise,
                               const SpectralMultiplier& mult) {
  const int n = noise.lattice.n();
  TorusFft fft(n);
  Eigen::ArrayXcd site = fft.inv(synthesis_spectrum(noise, mult));
  return (site.imag() * static_cast<double>(n) * n).abs().maxCoeff();
}

Field sample_field(const SpectralMultiplier& mult, uint64_t seed) {
  return synthesize(sample_noise(mult.lattice, seed), mult);
}

double decomposition_identity_check(const TorusLattice& lat, double mass_sq, double s) {
  SpectralMultiplier lhs_a = gff_multiplier(lat, mass_sq, 0.0);
  SpectralMultiplier lhs_b = gff_multiplier(lat, mass_sq, s);
  SpectralMultiplier rhs_a = massive_gff_multiplier(lat, mass_sq, s);
  SpectralMultiplier rhs_b = gs_multiplier(lat, mass_sq, s);
  return ((lhs_a.values - lhs_b.values) - rhs_a.values - rhs_b.values).abs().maxCoeff();
}

SpectralNoise shared_noise_refinement(const SpectralNoise& fine,
                                      const TorusLattice& coarse) {
  const int nf = fine.lattice.n(), nc = coarse.n();
  if (nf % nc != 0)
    throw ConfigError("shared_noise_refinement: coarse n must divide fine n");
  SpectralNoise out{coarse, Eigen::ArrayXcd(coarse.site_count()), fine.seed};
  auto fine_index = [&](int qc) {
    // fine mode carrying the same wave vector as coarse mode qc
    auto fold = [](int m, int n) { return m <= n / 2 ? m : m - n; };
    int a = fold(coarse.row(qc), nc), b = fold(coarse.col(qc), nc);
    return fine.lattice.site_index(((a % nf) + nf) % nf, ((b % nf) + nf) % nf);
  };
  for (int qc = 0; qc < coarse.site_count(); ++qc) {
    int pc = coarse.mode_partner(qc);
    int qf = fine_index(qc);
    if (pc == qc) {
      // self-paired on the coarse dual: must be real with unit variance
      out.coefficients[qc] = fine.lattice.self_paired(qf)
                                 ? fine.coefficients[qf]
                                 : std::sqrt(2.0) * fine.coefficients[qf].real();
    } else if (qc < pc) {
      // one representative per pair; the coarse-Nyquist edge modes map to
      // fine modes that are not fine partners, so the partner must be
      // conjugated rather than copied
      out.coefficients[qc] = fine.coefficients[qf];
      out.coefficients[pc] = std::conj(fine.coefficients[qf]);
    }
  }
  return out;
}

double refinement_l2_gap(const SpectralMultiplier& fine, const SpectralMultiplier& coarse) {
  const int nf = fine.lattice.n(), nc = coarse.lattice.n();
  if (nf % nc != 0) throw ConfigError("refinement_l2_gap: coarse n must divide fine n");
  std::vector<bool> consumed(fine.lattice.site_count(), false);
  auto fold = [](int m, int n) { return m <= n / 2 ? m : m - n; };
  double total = 0.0;
  for (int qc = 0; qc < coarse.lattice.site_count(); ++qc) {
    int a = fold(coarse.lattice.row(qc), nc), b = fold(coarse.lattice.col(qc), nc);
    int qf = fine.lattice.site_index(((a % nf) + nf) % nf, ((b % nf) + nf) % nf);
    double q_c = std::sqrt(coarse.values[qc]);
    double q_f = std::sqrt(fine.values[qf]);
    if (coarse.lattice.self_paired(qc) && !fine.lattice.self_paired(qf)) {
      // coarse takes sqrt(2) Re X; fine pair k,-k contributes 2 q_f Re X
      double d = q_c - std::sqrt(2.0) * q_f;
      total += d * d;
      consumed[qf] = true;
      consumed[fine.lattice.mode_partner(qf)] = true;
    } else {
      double d = q_c - q_f;
      total += d * d;
      consumed[qf] = true;
    }
  }
  for (int q = 0; q < fine.lattice.site_count(); ++q)
    if (!consumed[q]) total += fine.values[q];
  return total;
}

Field apply_matrix(const Field& f, const Eigen::ArrayXd& matrix_eigenvalues) {
  const int n = f.lattice.n();
  TorusFft fft(n);
  Eigen::ArrayXcd spec = fft.fwd(f.values.cast<std::complex<double>>());
  spec *= matrix_eigenvalues.cast<std::complex<double>>();
  return Field(f.lattice, fft.inv(spec).real().eval());
}

Field apply_covariance_kernel(const Field& f, const SpectralMultiplier& mult) {
  double n2 = static_cast<double>(f.lattice.n()) * f.lattice.n();
  return apply_matrix(f, (mult.values * n2).eval());
}

double quadratic_form(const Field& v, const Eigen::ArrayXd& matrix_eigenvalues) {
  const int n = v.lattice.n();
  TorusFft fft(n);
  Eigen::ArrayXcd spec = fft.fwd(v.values.cast<std::complex<double>>());
  double n2 = static_cast<double>(n) * n;
  return (spec.abs2() * matrix_eigenvalues).sum() / n2;
}

double covariance_at(const SpectralMultiplier& mult, int di, int dj) {
  const TorusLattice& lat = mult.lattice;
  const int n = lat.n();
  double acc = 0.0;
  for (int q = 0; q < lat.site_count(); ++q) {
    double phase = 2.0 * M_PI * (lat.row(q) * di + lat.col(q) * dj) / n;
    acc += mult.values[q] * std::cos(phase);
  }
  return acc;
}

}  // namespace sgx::spectral
