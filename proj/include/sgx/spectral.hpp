#pragma once

#include <Eigen/Dense>
#include <string>

#include "sgx/field.hpp"
#include "sgx/lattice.hpp"

// Exact Gaussian sampling by Fourier synthesis.
//
// Conventions (fixed once, everything else follows):
//   * a covariance is a spectral multiplier chat(k) >= 0 in the torus inner
//     product <f,g> = eps^2 sum_x f g, so the full massive GFF is
//     chat(k) = 1/(lambda_k + m^2) with lambda_k the -Laplacian multiplier;
//   * fields are synthesized as phi(x) = sum_k sqrt(chat(k)) X(k) e^{ikx}
//     with X a Hermitian standard complex Gaussian vector, which gives
//     per-site variance sum_k chat(k) and covariance sum_k chat(k) cos(k.x);
//   * as a site matrix the same covariance reads K(x,y) = sum_k chat e^{ik(x-y)}
//     (matrix eigenvalue n^2 chat(k)).

namespace sgx::spectral {

struct SpectralNoise {
  TorusLattice lattice;
  Eigen::ArrayXcd coefficients;  // FFT mode order, X(k) = conj(X(-k))
  uint64_t seed = 0;
};

struct SpectralMultiplier {
  TorusLattice lattice;
  Eigen::ArrayXd values;  // chat(k) >= 0, FFT mode order
  std::string label;
};

// Hermitian standard complex Gaussian noise, one coefficient per dual mode.
// Deterministic in (lattice, seed) and independent of evaluation order:
// mode q draws from the Philox block (seed, "spectral-noise", q).
SpectralNoise sample_noise(const TorusLattice& lat, uint64_t seed);

// Covariance of Phi_t^GFF = int_t^inf q_u dW_u:  e^{-t(lambda+m^2)}/(lambda+m^2).
// t = 0 is the full massive GFF.
SpectralMultiplier gff_multiplier(const TorusLattice& lat, double mass_sq, double t);

// c_t = int_0^t cdot_s ds:  (1 - e^{-t(lambda+m^2)})/(lambda+m^2).
SpectralMultiplier heat_kernel_multiplier(const TorusLattice& lat, double mass_sq, double t);

// cdot_t = e^{t Delta} e^{-m^2 t}:  e^{-t(lambda+m^2)}.
SpectralMultiplier heat_rate_multiplier(const TorusLattice& lat, double mass_sq, double t);

// g_s(lambda+m^2) with g_s(mu) = (1-e^{-mu s})/mu - 1/(mu + 1/s).
SpectralMultiplier gs_multiplier(const TorusLattice& lat, double mass_sq, double s);
double gs_scalar(double mu, double s);

// 1/(lambda + m^2 + 1/s), the GFF with mass m^2 + 1/s.
SpectralMultiplier massive_gff_multiplier(const TorusLattice& lat, double mass_sq, double s);

// phi(x) = sum_k sqrt(chat(k)) X(k) e^{ikx}, real by Hermitian symmetry.
Field synthesize(const SpectralNoise& noise, const SpectralMultiplier& mult);

// Largest |imaginary part| left by the inverse transform (diagnostic).
double synthesis_imag_residual(const SpectralNoise& noise, const SpectralMultiplier& mult);

// Convenience: synthesize(sample_noise(lat, seed), mult).
Field sample_field(const SpectralMultiplier& mult, uint64_t seed);

// max_k | [gff(0)-gff(s)](k) - [massive(s)](k) - [gs](k) |; exact identity,
// deviations are pure rounding.
double decomposition_identity_check(const TorusLattice& lat, double mass_sq, double s);

// Restriction of a fine noise collection to the coarse dual (the shared-noise
// coupling across resolutions).  Coarse-Nyquist modes, self-paired on the
// coarse dual but paired on the fine one, take sqrt(2)*Re X so the coarse
// vector keeps the Hermitian invariant with unit mode variance.
SpectralNoise shared_noise_refinement(const SpectralNoise& fine, const TorusLattice& coarse);

// E || phi_coarse - phi_fine|_coarse ||^2_{L2}, exact for the coupling above;
// equals sum_k |qhat_c 1_{k in coarse dual} - qhat_f|^2 up to the Nyquist
// cross terms.
double refinement_l2_gap(const SpectralMultiplier& fine, const SpectralMultiplier& coarse);

// Site matrix M with eigenvalue mu(q) on mode q, applied to a field.
Field apply_matrix(const Field& f, const Eigen::ArrayXd& matrix_eigenvalues);

// Covariance kernel K(x,y) = sum_k chat e^{ik(x-y)} applied to a field.
Field apply_covariance_kernel(const Field& f, const SpectralMultiplier& mult);

// v^T M v for the same eigenvalue convention.
double quadratic_form(const Field& v, const Eigen::ArrayXd& matrix_eigenvalues);

// sum_k chat(k) cos(k . x) for a site displacement (di, dj).
double covariance_at(const SpectralMultiplier& mult, int di, int dj);

}  // namespace sgx::spectral
