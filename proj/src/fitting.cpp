#include "firmbreak/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "firmbreak/error.hpp"

namespace firmbreak {

ErrorModel::ErrorModel(double inflation) : inflation_(inflation) {
  if (!std::isfinite(inflation) || inflation <= 0.0) {
    throw Error(ErrorKind::Domain, "error inflation must be positive and finite");
  }
}

double ErrorModel::sigma(double count) const noexcept { return inflation_ * std::sqrt(count); }

double LogLogFit::cov(int i, int j) const {
  return covariance.at(static_cast<std::size_t>(i * (degree + 1) + j));
}

double LogLogFit::stderr_of(int j) const { return std::sqrt(cov(j, j)); }

std::vector<double> sigma_counts(const SizeHistogram& h, const SizeRange& r, const ErrorModel& em) {
  std::vector<double> out;
  for (const auto& b : h.slice(r)) {
    if (!(b.count > 0.0)) {
      throw Error(ErrorKind::ZeroCount, "zero count at size " + std::to_string(b.size));
    }
    out.push_back(em.sigma(b.count));
  }
  return out;
}

namespace detail {

double log_sigma(double count, const ErrorModel& em) noexcept {
  return em.sigma(count) / (count * std::numbers::ln10);
}

WlsSolution solve_wls(std::span<const double> x, std::span<const double> y,
                      std::span<const double> sigma, int degree) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index p = degree + 1;
  if (n < p) throw Error(ErrorKind::Underdetermined, "fewer points than coefficients");

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = 1.0 / sigma[static_cast<std::size_t>(i)];
    double power = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      design(i, j) = power * w;
      power *= x[static_cast<std::size_t>(i)];
    }
    rhs(i) = y[static_cast<std::size_t>(i)] * w;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) throw Error(ErrorKind::DegenerateDesign, "weighted design matrix is singular");
  Eigen::VectorXd coef = qr.solve(rhs);

  // (AᵀA)⁻¹ = P R⁻¹ R⁻ᵀ Pᵀ for A P = Q R.
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
  Eigen::MatrixXd cov = qr.colsPermutation() * cov_perm * qr.colsPermutation().transpose();
  cov = 0.5 * (cov + cov.transpose());

  WlsSolution out;
  out.coefficients.assign(coef.data(), coef.data() + p);
  out.covariance.resize(static_cast<std::size_t>(p * p));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) out.covariance[static_cast<std::size_t>(i * p + j)] = cov(i, j);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    double r_i = (y[k] - evaluate_log(out.coefficients, x[k])) / sigma[k];
    out.chi2 += r_i * r_i;
  }
  return out;
}

}  // namespace detail

double evaluate_log(std::span<const double> coefficients, double x) noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double evaluate(const LogLogFit& fit, double size) {
  if (!(size > 0.0)) throw Error(ErrorKind::Domain, "size must be positive");
  return std::pow(10.0, evaluate_log(fit.coefficients, std::log10(size)));
}

LogLogFit fit_sizes(const SizeHistogram& h, std::span<const int> sizes, int degree,
                    const ErrorModel& em) {
  if (degree < 1 || degree > kMaxDegree) {
    throw Error(ErrorKind::Unsupported,
                "polynomial degree " + std::to_string(degree) + " not in 1..4");
  }
  if (!std::is_sorted(sizes.begin(), sizes.end()) ||
      std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
    throw Error(ErrorKind::Domain, "fit sizes must be strictly increasing");
  }
  if (static_cast<int>(sizes.size()) < degree + 2) {
    throw Error(ErrorKind::Underdetermined, "degree " + std::to_string(degree) + " fit needs at least " +
                                                std::to_string(degree + 2) + " bins, got " +
                                                std::to_string(sizes.size()));
  }
  const ErrorModel unit(1.0);
  std::vector<double> x, y, sigma;
  for (int size : sizes) {
    double count = h.count_at(size);
    if (!(count > 0.0)) {
      throw Error(ErrorKind::ZeroCount, "zero count at size " + std::to_string(size) +
                                            "; narrow the fit range");
    }
    x.push_back(std::log10(static_cast<double>(size)));
    y.push_back(std::log10(count));
    sigma.push_back(detail::log_sigma(count, unit));
  }
  // k scales every σ alike: coefficients do not depend on it, χ² scales by
  // 1/k² and the covariance by k².
  auto sol = detail::solve_wls(x, y, sigma, degree);
  const double k2 = em.inflation() * em.inflation();
  sol.chi2 /= k2;
  for (double& c : sol.covariance) c *= k2;

  LogLogFit fit;
  fit.coefficients = std::move(sol.coefficients);
  fit.degree = degree;
  fit.covariance = std::move(sol.covariance);
  fit.chi2 = sol.chi2;
  fit.dof = static_cast<int>(sizes.size()) - degree - 1;
  fit.p_value = chi2_pvalue(fit.chi2, fit.dof);
  fit.fit_range = {sizes.front(), sizes.back()};
  fit.sizes.assign(sizes.begin(), sizes.end());
  return fit;
}

LogLogFit fit_loglog(const SizeHistogram& h, const SizeRange& r, int degree, const ErrorModel& em) {
  h.slice(r);  // range check
  std::vector<int> sizes;
  for (int a = r.lo; a <= r.hi; ++a) sizes.push_back(a);
  return fit_sizes(h, sizes, degree, em);
}

LogLogFit fit_excluding(const SizeHistogram& h, const SizeRange& r, std::span<const int> excluded,
                        int degree, const ErrorModel& em) {
  h.slice(r);
  std::vector<int> sizes;
  for (int a = r.lo; a <= r.hi; ++a) {
    if (std::find(excluded.begin(), excluded.end(), a) == excluded.end()) sizes.push_back(a);
  }
  return fit_sizes(h, sizes, degree, em);
}

}  // namespace firmbreak
