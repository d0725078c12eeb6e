#include "sgx/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sgx/errors.hpp"
#include "sgx/rng.hpp"

namespace sgx::stats {

namespace {

constexpr double kSqrt8Pi = 5.0132565492620005;  // sqrt(8*pi)

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double ks_p_value(double statistic, long n) {
  double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * statistic);
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("ks_two_sample_p: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_statistic_exponential(std::vector<double> data, double h0, double rate) {
  if (data.empty()) throw ConfigError("ks_statistic_exponential: empty sample");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    double f = -std::expm1(-rate * (data[i] - h0));
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

TestFunction box_bump(double x_lo, double x_hi, double y_lo, double y_hi, double h0,
                      double width, double amplitude) {
  if (width <= 0.0 || amplitude < 0.0) throw ConfigError("box_bump: bad parameters");
  auto smooth = [](double v) { return v * v * (3.0 - 2.0 * v); };
  TestFunction tf;
  tf.h0 = h0;
  tf.f = [=](double x, double y, double h) {
    if (x < x_lo || x >= x_hi || y < y_lo || y >= y_hi) return 0.0;
    double u = (h - h0) / width;
    if (u <= 0.0 || u >= 2.0) return 0.0;
    return amplitude * (u <= 1.0 ? smooth(u) : smooth(2.0 - u));
  };
  return tf;
}

TestFunction gumbel_step(double g, double h0) {
  if (g < 0.0 || g >= 1.0) throw ConfigError("gumbel_step: need 0 <= g < 1");
  double level = -std::log1p(-g);
  TestFunction tf;
  tf.h0 = h0;
  tf.f = [=](double, double, double h) { return h > h0 ? level : 0.0; };
  return tf;
}

bool validate_test_function(const TestFunction& f, double h_min, double h_max, int grid) {
  for (int ix = 0; ix < grid; ++ix) {
    for (int iy = 0; iy < grid; ++iy) {
      double x = static_cast<double>(ix) / grid, y = static_cast<double>(iy) / grid;
      for (int ih = 0; ih <= grid; ++ih) {
        double h = h_min + (h_max - h_min) * ih / grid;
        double v = f(x, y, h);
        if (v < 0.0) return false;
        if (h < f.h0 && v != 0.0) return false;
      }
    }
  }
  return true;
}

FitReport laplace_functional(const std::vector<extremes::ExtremalProcessSample>& samples,
                             const TestFunction& f) {
  if (samples.empty()) throw ConfigError("laplace_functional: need at least one sample");
  Eigen::ArrayXd vals(samples.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    double pairing = 0.0;
    for (const auto& p : samples[s].points) pairing += f(p.x, p.y, p.h);
    vals[s] = std::exp(-pairing);
  }
  FitReport rep;
  rep.sample_size = static_cast<long>(samples.size());
  rep.estimate = vals.mean();
  if (samples.size() > 1)
    rep.std_error = std::sqrt((vals - rep.estimate).square().sum() /
                              (vals.size() * (vals.size() - 1.0)));
  return rep;
}

TestFunction translate_test_function(const TestFunction& f, const Field& phi) {
  Field copy = phi;
  TestFunction tf;
  tf.h0 = -std::numeric_limits<double>::infinity();  // support moves with phi
  tf.f = [f, copy](double x, double y, double h) {
    const TorusLattice& lat = copy.lattice;
    int n = lat.n();
    int i = static_cast<int>(std::lround(x * n)) % n;
    int j = static_cast<int>(std::lround(y * n)) % n;
    if (i < 0) i += n;
    if (j < 0) j += n;
    return f(x, y, h + copy.values[lat.site_index(i, j)]);
  };
  return tf;
}

FitReport exceedance_rate_fit(const std::vector<double>& heights, double h0) {
  FitReport rep;
  rep.sample_size = static_cast<long>(heights.size());
  if (heights.size() < 10) {
    rep.note = "insufficient data: need at least 10 exceedances";
    rep.estimate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  double mean_excess = 0.0;
  for (double h : heights) {
    if (h < h0) throw ConfigError("exceedance_rate_fit: height below h0");
    mean_excess += h - h0;
  }
  mean_excess /= heights.size();
  if (mean_excess <= 0.0) {
    rep.note = "degenerate sample: zero mean excess";
    rep.estimate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.estimate = 1.0 / mean_excess;
  rep.std_error = rep.estimate / std::sqrt(static_cast<double>(heights.size()));
  rep.statistic = ks_statistic_exponential(heights, h0, rep.estimate);
  rep.p_value = ks_p_value(rep.statistic, rep.sample_size);
  rep.note = "KS vs Exp(alpha_hat) uses the estimated rate (Lilliefors caveat)";
  rep.details["alpha_theory"] = kSqrt8Pi;
  rep.details["ks_theory_stat"] = ks_statistic_exponential(heights, h0, kSqrt8Pi);
  rep.details["ks_theory_p"] =
      ks_p_value(rep.details["ks_theory_stat"], rep.sample_size);
  return rep;
}

std::pair<double, double> linear_fit_slope(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw ConfigError("linear_fit_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("linear_fit_slope: no variation in x");
  double b = sxy / sxx;
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - my - b * (x[i] - mx);
    rss += r * r;
  }
  double se = n > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return {b, se};
}

FitReport gumbel_tail_fit(const std::vector<double>& max_values) {
  if (max_values.size() < 100)
    throw ConfigError("gumbel_tail_fit: need at least 100 values");
  std::vector<double> sorted = max_values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> xs, ys;
  for (size_t i = 0; i < sorted.size(); ++i) {
    double fhat = (i + 1.0) / (n + 1.0);  // Weibull plotting position
    if (fhat < 0.8 || fhat > 0.99) continue;
    xs.push_back(sorted[i]);
    ys.push_back(std::log(-std::log(fhat)));
  }
  std::vector<double> distinct = xs;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  FitReport rep;
  rep.sample_size = static_cast<long>(xs.size());
  if (distinct.size() < 5) {
    rep.note = "degenerate empirical CDF in the tail window";
    rep.estimate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  auto [slope, se] = linear_fit_slope(xs, ys);
  rep.estimate = slope;
  rep.std_error = se;
  rep.details["alpha_theory"] = kSqrt8Pi;
  return rep;
}

GrowthReport level_set_growth_from_sizes(const std::vector<std::vector<long>>& sizes,
                                         const std::vector<double>& lambda_grid) {
  if (sizes.size() < 1) throw ConfigError("level_set_growth: need fields");
  GrowthReport report;
  std::vector<double> xs, ys;
  for (size_t li = 0; li < lambda_grid.size(); ++li) {
    GrowthRow row;
    row.lambda = lambda_grid[li];
    double acc = 0.0;
    for (const auto& per_field : sizes) {
      long sz = per_field.at(li);
      if (sz > 0) {
        acc += std::log(static_cast<double>(sz));
        ++row.nonempty;
      }
    }
    if (row.nonempty == 0) {
      row.dropped = true;
      report.slope.note += "lambda=" + std::to_string(row.lambda) + " dropped (all empty); ";
    } else {
      row.mean_log_size = acc / row.nonempty;
      xs.push_back(row.lambda);
      ys.push_back(row.mean_log_size);
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 2 && !(std::adjacent_find(xs.begin(), xs.end(),
                                             std::not_equal_to<>()) == xs.end())) {
    auto [slope, se] = linear_fit_slope(xs, ys);
    report.slope.estimate = slope;
    report.slope.std_error = se;
    report.slope.sample_size = static_cast<long>(xs.size());
  } else {
    report.slope.estimate = std::numeric_limits<double>::quiet_NaN();
    report.slope.note += "slope undefined (fewer than 2 usable lambda values)";
  }
  return report;
}

GrowthReport level_set_growth(const std::vector<const Field*>& fields,
                              const std::vector<double>& lambda_grid, double m_eps) {
  if (fields.size() < 20)
    throw ConfigError("level_set_growth: need at least 20 fields");
  std::vector<std::vector<long>> sizes(fields.size());
  for (size_t f = 0; f < fields.size(); ++f)
    for (double lambda : lambda_grid)
      sizes[f].push_back(
          static_cast<long>(extremes::level_set(*fields[f], lambda, m_eps).sites.size()));
  return level_set_growth_from_sizes(sizes, lambda_grid);
}

double chaos_measure(const Field& phi, const std::vector<int>& region) {
  double eps = phi.lattice.epsilon();
  double log_inv_eps = std::log(1.0 / eps);
  double prefactor = 2.0 / std::sqrt(2.0 * M_PI) * log_inv_eps;
  double acc = 0.0;
  for (int s : region)
    acc += (prefactor - phi.values[s]) *
           std::exp(-2.0 * log_inv_eps + kSqrt8Pi * phi.values[s]);
  return eps * eps * acc;
}

CorrespondenceCounts correspondence_fraction(const Field& psi, const Field& x_gff,
                                             double r, double lambda, double kappa,
                                             double m_eps) {
  if (psi.lattice.n() != x_gff.lattice.n())
    throw ConfigError("correspondence_fraction: lattice mismatch");
  if (r < 1.0 || kappa < 0.0) throw ConfigError("correspondence_fraction: need r >= 1, kappa >= 0");
  const TorusLattice& lat = psi.lattice;
  double r_eps = r * lat.epsilon();

  std::vector<int> theta_psi = extremes::local_maxima(psi, r_eps);
  std::vector<int> theta_gff_list = extremes::local_maxima(x_gff, r_eps);
  std::vector<char> in_theta_gff(lat.site_count(), 0);
  for (int s : theta_gff_list) in_theta_gff[s] = 1;

  double threshold = m_eps - lambda;
  CorrespondenceCounts counts;
  for (int x : theta_psi) {
    if (psi.values[x] < threshold || x_gff.values[x] < threshold) continue;
    ++counts.eligible;
    int pi = extremes::argmax_map(x_gff, x, 2.0 * r_eps);
    bool ok = in_theta_gff[pi] != 0;
    ok = ok && lat.offsets_in_ball(lat.row(pi) - lat.row(x), lat.col(pi) - lat.col(x),
                                   r_eps / 2.0);
    double gap = psi.values[x] - psi.values[pi];
    ok = ok && gap >= 0.0 && gap <= kappa;
    if (ok) ++counts.good;
  }
  return counts;
}

FitReport correspondence_report(const std::vector<CorrespondenceCounts>& counts) {
  FitReport rep;
  long eligible = 0, good = 0;
  for (const auto& c : counts) {
    eligible += c.eligible;
    good += c.good;
  }
  rep.sample_size = eligible;
  if (eligible == 0) {
    rep.note = "empty intersection: no eligible maxima";
    return rep;
  }
  double p = static_cast<double>(good) / eligible;
  rep.estimate = p;
  rep.std_error = std::sqrt(p * (1.0 - p) / eligible);
  return rep;
}

FitReport strip_ratio_test(const std::vector<extremes::ExtremalProcessSample>& samples,
                           double h0, double h1, int n_boot, uint64_t seed) {
  if (!(h0 < h1)) throw ConfigError("strip_ratio_test: need h0 < h1");
  if (samples.empty()) throw ConfigError("strip_ratio_test: no samples");
  const size_t S = samples.size();
  std::vector<double> lower(S, 0.0), upper(S, 0.0);
  for (size_t s = 0; s < S; ++s) {
    for (const auto& p : samples[s].points) {
      if (p.h >= h0 && p.h < h1) ++lower[s];
      if (p.h >= h1) ++upper[s];
    }
  }
  double lo_sum = 0.0, up_sum = 0.0;
  for (size_t s = 0; s < S; ++s) {
    lo_sum += lower[s];
    up_sum += upper[s];
  }
  FitReport rep;
  rep.sample_size = static_cast<long>(S);
  if (up_sum == 0.0) {
    rep.note = "refused: zero counts in the upper strip";
    rep.estimate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.estimate = lo_sum / up_sum;
  rep.details["theory_sqrt8pi"] = std::exp(kSqrt8Pi * (h1 - h0)) - 1.0;

  rng::Stream stream(seed, "strip-bootstrap");
  std::vector<double> boots;
  boots.reserve(n_boot);
  int skipped = 0;
  for (int b = 0; b < n_boot; ++b) {
    double lo = 0.0, up = 0.0;
    for (size_t s = 0; s < S; ++s) {
      size_t pick = static_cast<size_t>(stream.next_u64() % S);
      lo += lower[pick];
      up += upper[pick];
    }
    if (up == 0.0) {
      ++skipped;
      continue;
    }
    boots.push_back(lo / up);
  }
  if (boots.size() >= 2) {
    double m = 0.0;
    for (double v : boots) m += v;
    m /= boots.size();
    double var = 0.0;
    for (double v : boots) var += (v - m) * (v - m);
    rep.std_error = std::sqrt(var / (boots.size() - 1.0));
  }
  if (skipped > 0)
    rep.note = "bootstrap resamples with empty upper strip skipped: " + std::to_string(skipped);
  return rep;
}

std::pair<FitReport, FitReport> inclusion_test(const std::vector<const Field*>& a,
                                               const std::vector<const Field*>& b,
                                               double lambda, double m_eps) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("inclusion_test: need matched non-empty field lists");
  long ab = 0, ba = 0;
  const long S = static_cast<long>(a.size());
  for (long s = 0; s < S; ++s) {
    double t1 = m_eps - lambda, t2 = m_eps - 2.0 * lambda;
    bool a_in_b = true, b_in_a = true;
    const auto& va = a[s]->values;
    const auto& vb = b[s]->values;
    for (int i = 0; i < va.size(); ++i) {
      if (va[i] >= t1 && vb[i] < t2) a_in_b = false;
      if (vb[i] >= t1 && va[i] < t2) b_in_a = false;
      if (!a_in_b && !b_in_a) break;
    }
    ab += a_in_b;
    ba += b_in_a;
  }
  auto report = [S](long hits) {
    FitReport rep;
    rep.sample_size = S;
    double p = static_cast<double>(hits) / S;
    rep.estimate = p;
    rep.std_error = std::sqrt(p * (1.0 - p) / S);
    return rep;
  };
  return {report(ab), report(ba)};
}

}  // namespace sgx::stats
