#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sgx/extremes.hpp"
#include "sgx/field.hpp"

// Estimators and hypothesis tests that turn the limit theorems into
// desk-scale checks.

namespace sgx::stats {

struct FitReport {
  double estimate = 0.0;
  double std_error = 0.0;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  long sample_size = 0;
  std::string note;
  std::map<std::string, double> details;
};

// Non-negative test function on [0,1)^2 x R vanishing for h < h0.
struct TestFunction {
  std::function<double(double x, double y, double h)> f;
  double h0 = 0.0;

  double operator()(double x, double y, double h) const { return f(x, y, h); }
};

// Indicator of a box in space times a smooth compact bump in height
// (ramps up on [h0, h0+width], down on [h0+width, h0+2*width]).
TestFunction box_bump(double x_lo, double x_hi, double y_lo, double y_hi, double h0,
                      double width, double amplitude);

// The Gumbel-generating family: 0 for h <= h0, -log(1-g) above.
TestFunction gumbel_step(double g, double h0);

// Asserts non-negativity and vanishing below h0 on a sample grid.
bool validate_test_function(const TestFunction& f, double h_min = -10.0,
                            double h_max = 10.0, int grid = 33);

// Mean and standard error of exp(-<eta, f>).
FitReport laplace_functional(const std::vector<extremes::ExtremalProcessSample>& samples,
                             const TestFunction& f);

// (f o tau_phi)(x, h) = f(x, h + phi(x)), phi looked up at the nearest site.
TestFunction translate_test_function(const TestFunction& f, const Field& phi);

// Exponential MLE for heights above h0: alpha = 1/mean(h - h0); one-sample
// KS against Exp(alpha_hat) (Lilliefors caveat: alpha estimated from the same
// data) and against the theoretical Exp(sqrt(8 pi)), reported in details.
FitReport exceedance_rate_fit(const std::vector<double>& heights, double h0);

// Upper-tail regression of log(-log Fhat) on x over the quantile window
// [0.8, 0.99]; for a (shifted) Gumbel with rate alpha the slope is -alpha.
FitReport gumbel_tail_fit(const std::vector<double>& max_values);

struct GrowthRow {
  double lambda = 0.0;
  double mean_log_size = 0.0;
  long nonempty = 0;
  bool dropped = false;
};
struct GrowthReport {
  std::vector<GrowthRow> rows;
  FitReport slope;  // least squares of mean log|Gamma| on lambda
};
GrowthReport level_set_growth(const std::vector<const Field*>& fields,
                              const std::vector<double>& lambda_grid, double m_eps);
// Convenience for precomputed level-set sizes, one row per field.
GrowthReport level_set_growth_from_sizes(const std::vector<std::vector<long>>& sizes,
                                         const std::vector<double>& lambda_grid);

// Derivative-martingale measure
//   mu_eps(A) = eps^2 sum_{x in A} ((2/sqrt(2 pi)) log(1/eps) - phi(x))
//               * exp(-2 log(1/eps) + sqrt(8 pi) phi(x)).
double chaos_measure(const Field& phi, const std::vector<int>& region);

// Correspondence of local maxima between psi and x_gff: over eligible sites
// x in Theta_{r eps}(psi) cap Gamma^psi(lambda) cap Gamma^gff(lambda), counts
// those with Pi^gff(x) in Theta_{r eps}(x_gff), |Pi^gff(x) - x| <= r eps / 2
// and 0 <= psi(x) - psi(Pi^gff(x)) <= kappa, where Pi^gff is the argmax of
// x_gff over Lambda_{2 r eps}.  Swap the arguments for the symmetric variant.
struct CorrespondenceCounts {
  long eligible = 0;
  long good = 0;
};
CorrespondenceCounts correspondence_fraction(const Field& psi, const Field& x_gff,
                                             double r, double lambda, double kappa,
                                             double m_eps);
FitReport correspondence_report(const std::vector<CorrespondenceCounts>& counts);

// Ratio of mean counts N[h0,h1) / N[h1,inf) across samples; the random
// spatial mass cancels, leaving e^{alpha (h1-h0)} - 1.  Bootstrap SE.
FitReport strip_ratio_test(const std::vector<extremes::ExtremalProcessSample>& samples,
                           double h0, double h1, int n_boot, uint64_t seed);

// Empirical probabilities of Gamma^a(lambda) subset Gamma^b(2 lambda) and the
// reverse, over paired fields.
std::pair<FitReport, FitReport> inclusion_test(const std::vector<const Field*>& a,
                                               const std::vector<const Field*>& b,
                                               double lambda, double m_eps);

// One-sample KS p-value (asymptotic, with Stephens' small-sample factor).
double ks_p_value(double statistic, long n);
// Two-sample KS test p-value for real samples.
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);
// One-sample KS statistic of data against Exp(rate) above location h0.
double ks_statistic_exponential(std::vector<double> data, double h0, double rate);

// Simple least squares y = a + b x; returns (b, SE(b)).
std::pair<double, double> linear_fit_slope(const std::vector<double>& x,
                                           const std::vector<double>& y);

}  // namespace sgx::stats
