#include "firmbreak/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "firmbreak/error.hpp"
#include "firmbreak/rng.hpp"

namespace firmbreak {

namespace {

constexpr double kSlopeLo = -10.0;
constexpr double kSlopeHi = 0.0;

// Fills the shared bookkeeping once the counterfactual counts over span are known.
ScenarioResult finish(const SizeHistogram& h, const SizeRange& span,
                      const std::vector<double>& cf_counts, int partition) {
  std::vector<double> counts;
  for (const auto& b : h.bins()) counts.push_back(b.count);
  const auto offset = static_cast<std::size_t>(span.lo - h.span().lo);
  std::copy(cf_counts.begin(), cf_counts.end(), counts.begin() + static_cast<std::ptrdiff_t>(offset));

  ScenarioResult out{.counterfactual = h.with_counts(counts), .span = span};
  const auto full = h.span();
  out.delta_workers = total_workers(out.counterfactual, full) - total_workers(h, full);
  out.relative_pct = 100.0 * out.delta_workers / total_workers(h, span);
  out.partition_size = partition;
  auto observed = h.slice(span);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double term = observed[i].size * (cf_counts[i] - observed[i].count);
    (observed[i].size <= partition ? out.delta_upto_partition : out.delta_above_partition) += term;
  }
  return out;
}

void check_span(const SizeHistogram& h, const SizeRange& span) {
  h.slice(span);
  if (span.length() < 2) throw Error(ErrorKind::Domain, "scenario span needs at least 2 sizes");
}

}  // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
  return kind == ScenarioKind::FixedSlope ? "fixed-slope" : "fixed-normalization";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "fs" || text == "fixed-slope") return ScenarioKind::FixedSlope;
  if (text == "fn" || text == "fixed-normalization") return ScenarioKind::FixedNormalization;
  throw Error(ErrorKind::MalformedInput, "unknown scenario kind '" + std::string(text) + "'");
}

ScenarioResult fixed_slope(const SizeHistogram& h, const LogLogFit& fit, const SizeRange& span,
                           std::optional<int> partition) {
  check_span(h, span);
  std::vector<double> fitted;
  double fitted_total = 0.0;
  for (int a = span.lo; a <= span.hi; ++a) {
    fitted.push_back(evaluate(fit, a));
    fitted_total += fitted.back();
  }
  if (!(fitted_total > 0.0) || !std::isfinite(fitted_total)) {
    throw Error(ErrorKind::DegenerateFit, "fit sums to zero or overflows over the span");
  }
  const double alpha = total_firms(h, span) / fitted_total;
  for (double& v : fitted) v *= alpha;

  auto out = finish(h, span, fitted, partition.value_or(fit.fit_range.hi));
  out.kind = ScenarioKind::FixedSlope;
  out.alpha = alpha;
  out.curve_coefficients = fit.coefficients;
  out.fit_used = fit;
  return out;
}

ScenarioResult fixed_normalization(const SizeHistogram& h, const SizeRange& span,
                                   std::optional<int> partition) {
  check_span(h, span);
  const double anchor = h.count_at(span.lo);
  if (!(anchor > 0.0)) {
    throw Error(ErrorKind::DegenerateAnchor, "count at anchor size " + std::to_string(span.lo) + " is zero");
  }
  const double target = total_firms(h, span);
  const double a0 = span.lo;
  auto excess = [&](double s) {
    double sum = 0.0;
    for (int a = span.lo; a <= span.hi; ++a) sum += anchor * std::pow(a / a0, s);
    return sum - target;
  };

  double lo = kSlopeLo, hi = kSlopeHi;
  double f_lo = excess(lo), f_hi = excess(hi);
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw Error(ErrorKind::NoSolution, "no slope in [-10, 0] conserves the number of firms");
  }
  // Excess increases with s. Bisect until the bracket cannot shrink further.
  double best = std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
  double best_f = std::min(std::fabs(f_lo), std::fabs(f_hi));
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double f_mid = excess(mid);
    if (std::fabs(f_mid) < best_f) {
      best = mid;
      best_f = std::fabs(f_mid);
    }
    if (f_mid == 0.0) break;
    (f_mid < 0.0 ? lo : hi) = mid;
  }
  if (best_f >= 1e-10 * target) {
    throw Error(ErrorKind::NoSolution, "slope bisection did not reach the count tolerance");
  }

  std::vector<double> curve;
  for (int a = span.lo; a <= span.hi; ++a) curve.push_back(anchor * std::pow(a / a0, best));

  auto out = finish(h, span, curve, partition.value_or(span.lo));
  out.kind = ScenarioKind::FixedNormalization;
  out.solved_slope = best;
  out.curve_coefficients = {std::log10(anchor) - best * std::log10(a0), best};
  return out;
}

ScenarioResult run_scenario(const SizeHistogram& h, const ErrorModel& em, const ScenarioSpec& spec) {
  if (spec.kind == ScenarioKind::FixedNormalization) {
    if (spec.degree != 1) {
      throw Error(ErrorKind::Unsupported, "fixed-normalization is only defined for degree 1");
    }
    return fixed_normalization(h, spec.span, spec.partition);
  }
  auto fit = fit_loglog(h, spec.fit_range, spec.degree, em);
  return fixed_slope(h, fit, spec.span, spec.partition);
}

double delta_uncertainty(const SizeHistogram& h, const ErrorModel& em, const ScenarioSpec& spec,
                         int samples, std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorKind::Domain, "delta_uncertainty needs at least 100 samples");
  if (spec.kind == ScenarioKind::FixedNormalization && spec.degree != 1) {
    throw Error(ErrorKind::Unsupported, "fixed-normalization is only defined for degree 1");
  }

  std::vector<double> base;
  for (const auto& b : h.bins()) base.push_back(b.count);
  std::vector<double> counts(base.size());

  // Welford accumulation over accepted samples.
  long accepted = 0;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    for (std::size_t j = 0; j < base.size(); ++j) {
      double noise = em.sigma(base[j]) * rng.normal();
      counts[j] = std::max(0.0, base[j] + noise);
    }
    double delta;
    try {
      delta = run_scenario(h.with_counts(counts), em, spec).delta_workers;
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    double d = delta - mean;
    mean += d / accepted;
    m2 += d * (delta - mean);
  }
  const long dropped = samples - accepted;
  if (dropped * 10 > samples || accepted < 2) {
    throw Error(ErrorKind::Instability, std::to_string(dropped) + " of " + std::to_string(samples) +
                                            " resamples failed");
  }
  return std::sqrt(m2 / static_cast<double>(accepted - 1));
}

}  // namespace firmbreak
