#pragma once

#include <span>
#include <vector>

#include "firmbreak/histogram.hpp"
#include "firmbreak/special.hpp"

namespace firmbreak {

inline constexpr int kMaxDegree = 4;

/// Poisson count errors σ = k·√n; k inflates them (k = 1.9 brings the
/// reduced χ² of averaged registry data to about one).
class ErrorModel {
 public:
  explicit ErrorModel(double inflation = 1.0);
  double inflation() const noexcept { return inflation_; }
  double sigma(double count) const noexcept;

 private:
  double inflation_;
};

/// Polynomial in log space: log10 n = Σ_j c_j (log10 A)^j.
/// Degree 1 is the power law n = 10^c0 · A^c1.
struct LogLogFit {
  std::vector<double> coefficients;
  int degree = 1;
  /// (degree+1)^2 entries, row-major, inverse of the weighted normal matrix.
  std::vector<double> covariance;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
  /// Hull of the sizes used; `sizes` lists them when the set has holes.
  SizeRange fit_range;
  std::vector<int> sizes;

  double intercept() const { return coefficients.at(0); }
  double slope() const { return coefficients.at(1); }
  double cov(int i, int j) const;
  double stderr_of(int j) const;
  double reduced_chi2() const { return dof > 0 ? chi2 / dof : 0.0; }
};

/// σ_i = k·√n_i over r. Throws a zero-count error if any count in r is 0.
std::vector<double> sigma_counts(const SizeHistogram& h, const SizeRange& r, const ErrorModel& em);

/// Weighted least squares of log10 n on log10 A over every bin in r, with
/// per-point σ_y = σ_n / (n ln 10).
LogLogFit fit_loglog(const SizeHistogram& h, const SizeRange& r, int degree, const ErrorModel& em);

/// Same as fit_loglog but over an arbitrary set of sizes (ascending, inside
/// the span). Used for consensus refits and bin-removal tests.
LogLogFit fit_sizes(const SizeHistogram& h, std::span<const int> sizes, int degree,
                    const ErrorModel& em);

/// fit_loglog over r with the listed sizes left out.
LogLogFit fit_excluding(const SizeHistogram& h, const SizeRange& r, std::span<const int> excluded,
                        int degree, const ErrorModel& em);

/// log10 of the model at log10 A = x.
double evaluate_log(std::span<const double> coefficients, double x) noexcept;
/// Model prediction in count space, 10^{Σ c_j (log10 A)^j}.
double evaluate(const LogLogFit& fit, double size);

namespace detail {

struct WlsSolution {
  std::vector<double> coefficients;
  std::vector<double> covariance;
  double chi2 = 0.0;
};

/// Polynomial WLS on raw points. Requires at least degree+1 points; throws a
/// degenerate-design error if the weighted design is rank deficient.
WlsSolution solve_wls(std::span<const double> x, std::span<const double> y,
                      std::span<const double> sigma, int degree);

/// σ of log10 n for a count n under em.
double log_sigma(double count, const ErrorModel& em) noexcept;

}  // namespace detail

}  // namespace firmbreak
