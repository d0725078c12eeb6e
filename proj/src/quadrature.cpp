#include "sgx/quadrature.hpp"

#include <cmath>

#include "sgx/errors.hpp"

namespace sgx::quadrature {

GaussHermite gauss_hermite(int count) {
  if (count < 1) throw ConfigError("gauss_hermite: need at least one node");
  // Golub-Welsch on the Hermite Jacobi matrix (weight e^{-x^2})
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int j = 1; j < count; ++j) {
    double b = std::sqrt(j / 2.0);
    jacobi(j, j - 1) = b;
    jacobi(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermite gh;
  gh.nodes = es.eigenvalues().array();
  gh.weights = Eigen::ArrayXd(count);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < count; ++i) {
    double q0 = es.eigenvectors()(0, i);
    gh.weights[i] = mu0 * q0 * q0;
  }
  return gh;
}

Eigen::MatrixXd dense_minus_laplacian(const TorusLattice& lat) {
  const int n = lat.n(), N = lat.site_count();
  double w = static_cast<double>(n) * n;  // eps^{-2}
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int x = lat.site_index(i, j);
      int nb[4] = {lat.site_index((i + 1) % n, j), lat.site_index((i + n - 1) % n, j),
                   lat.site_index(i, (j + 1) % n), lat.site_index(i, (j + n - 1) % n)};
      for (int y : nb) {
        M(x, x) += w;
        M(x, y) -= w;
      }
    }
  }
  return M;
}

Eigen::MatrixXd dense_covariance(const TorusLattice& lat, double mass_sq,
                                 const std::function<double(double)>& of_mu) {
  Eigen::MatrixXd L = dense_minus_laplacian(lat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  Eigen::VectorXd f(es.eigenvalues().size());
  for (int i = 0; i < f.size(); ++i) f[i] = of_mu(es.eigenvalues()[i] + mass_sq);
  double n2 = static_cast<double>(lat.n()) * lat.n();
  // kernel matrix carries n^2 relative to the operator eigenvalue
  return n2 * es.eigenvectors() * f.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd dense_gff_covariance(const TorusLattice& lat, double mass_sq) {
  return dense_covariance(lat, mass_sq, [](double mu) { return 1.0 / mu; });
}

Eigen::MatrixXd dense_heat_covariance(const TorusLattice& lat, double mass_sq, double t) {
  return dense_covariance(lat, mass_sq,
                          [t](double mu) { return -std::expm1(-t * mu) / mu; });
}

Eigen::MatrixXd dense_heat_rate_covariance(const TorusLattice& lat, double mass_sq,
                                           double t) {
  return dense_covariance(lat, mass_sq, [t](double mu) { return std::exp(-t * mu); });
}

void gaussian_sweep(const Eigen::MatrixXd& cov, int nodes_per_dim,
                    const std::function<void(const Eigen::VectorXd&, double)>& visit) {
  const int dim = static_cast<int>(cov.rows());
  if (dim > 6) throw ConfigError("gaussian_sweep: dimension too large for tensor GH");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd scale(dim);
  for (int i = 0; i < dim; ++i) scale[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
  // phi = Q diag(scale) y with y ~ N(0, I); y_j = sqrt(2) * node
  Eigen::MatrixXd B = es.eigenvectors() * scale.asDiagonal() * std::sqrt(2.0);

  GaussHermite gh = gauss_hermite(nodes_per_dim);
  Eigen::ArrayXd wnorm = gh.weights / std::sqrt(M_PI);  // per-dim weights sum to 1

  std::vector<int> idx(dim, 0);
  Eigen::VectorXd y(dim), phi(dim);
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      y[j] = gh.nodes[idx[j]];
      w *= wnorm[idx[j]];
    }
    phi.noalias() = B * y;
    visit(phi, w);
    int j = 0;
    while (j < dim && ++idx[j] == nodes_per_dim) idx[j++] = 0;
    if (j == dim) break;
  }
}

namespace {

double bare_potential(const SgParams& params, const Eigen::VectorXd& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  double sb = std::sqrt(params.beta);
  double acc = 0.0;
  for (int x = 0; x < phi.size(); ++x) acc += std::cos(sb * phi[x]);
  return eps2 * params.vertex_coefficient() * acc;
}

Eigen::VectorXd bare_gradient(const SgParams& params, const Eigen::VectorXd& phi) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  double sb = std::sqrt(params.beta);
  Eigen::VectorXd g(phi.size());
  for (int x = 0; x < phi.size(); ++x)
    g[x] = -eps2 * params.vertex_coefficient() * sb * std::sin(sb * phi[x]);
  return g;
}

}  // namespace

SgMoments sg_moments(const SgParams& params, int nodes_per_dim) {
  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  Eigen::MatrixXd A = eps2 * (dense_minus_laplacian(params.lattice) +
                              params.mass_sq * Eigen::MatrixXd::Identity(
                                                   params.lattice.site_count(),
                                                   params.lattice.site_count()));
  Eigen::MatrixXd cov = A.inverse();
  double sb = std::sqrt(params.beta);
  double zsum = 0.0, m2 = 0.0, mc = 0.0;
  gaussian_sweep(cov, nodes_per_dim, [&](const Eigen::VectorXd& phi, double w) {
    double bw = w * std::exp(-bare_potential(params, phi));
    zsum += bw;
    m2 += bw * phi[0] * phi[0];
    mc += bw * std::cos(sb * phi[0]);
  });
  return {m2 / zsum, mc / zsum};
}

double vt(const SgParams& params, double t, const Eigen::VectorXd& phi,
          int nodes_per_dim) {
  if (t <= 0.0) return bare_potential(params, phi);
  Eigen::MatrixXd ct = dense_heat_covariance(params.lattice, params.mass_sq, t);
  double acc = 0.0;
  gaussian_sweep(ct, nodes_per_dim, [&](const Eigen::VectorXd& zeta, double w) {
    acc += w * std::exp(-bare_potential(params, phi + zeta));
  });
  return -std::log(acc);
}

Eigen::VectorXd grad_vt(const SgParams& params, double t, const Eigen::VectorXd& phi,
                        int nodes_per_dim) {
  if (t <= 0.0) return bare_gradient(params, phi);
  Eigen::MatrixXd ct = dense_heat_covariance(params.lattice, params.mass_sq, t);
  double zsum = 0.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(phi.size());
  gaussian_sweep(ct, nodes_per_dim, [&](const Eigen::VectorXd& zeta, double w) {
    double bw = w * std::exp(-bare_potential(params, phi + zeta));
    zsum += bw;
    acc += bw * bare_gradient(params, phi + zeta);
  });
  return acc / zsum;
}

double polchinski_residual(const SgParams& params, double t, const Eigen::VectorXd& phi,
                           double dt, int nodes_per_dim) {
  const int N = static_cast<int>(phi.size());
  double dvdt = (vt(params, t + dt, phi, nodes_per_dim) -
                 vt(params, t - dt, phi, nodes_per_dim)) /
                (2.0 * dt);

  Eigen::MatrixXd ct = dense_heat_covariance(params.lattice, params.mass_sq, t);
  Eigen::MatrixXd kdot = dense_heat_rate_covariance(params.lattice, params.mass_sq, t);

  double eps2 = params.lattice.epsilon() * params.lattice.epsilon();
  double sb = std::sqrt(params.beta);

  double zsum = 0.0;
  Eigen::VectorXd ubar = Eigen::VectorXd::Zero(N);       // E_w[grad v0]
  Eigen::MatrixXd uu = Eigen::MatrixXd::Zero(N, N);      // E_w[grad grad^T]
  Eigen::VectorXd dbar = Eigen::VectorXd::Zero(N);       // E_w[diag Hessian v0]
  gaussian_sweep(ct, nodes_per_dim, [&](const Eigen::VectorXd& zeta, double w) {
    Eigen::VectorXd psi = phi + zeta;
    double bw = w * std::exp(-bare_potential(params, psi));
    Eigen::VectorXd u = bare_gradient(params, psi);
    zsum += bw;
    ubar += bw * u;
    uu.noalias() += bw * u * u.transpose();
    for (int x = 0; x < N; ++x)
      dbar[x] += bw * (-eps2 * params.vertex_coefficient() * params.beta *
                       std::cos(sb * psi[x]));
  });
  ubar /= zsum;
  uu /= zsum;
  dbar /= zsum;

  // sum_xy Kdot [d^2 v] = sum_x Kdot(x,x) E_w[d] - sum_xy Kdot Cov_w(u,u)
  Eigen::MatrixXd cov_u = uu - ubar * ubar.transpose();
  double lap_term = kdot.diagonal().dot(dbar) - (kdot.array() * cov_u.array()).sum();
  double grad_term = ubar.dot(kdot * ubar);

  return dvdt - 0.5 * lap_term + 0.5 * grad_term;
}

}  // namespace sgx::quadrature
