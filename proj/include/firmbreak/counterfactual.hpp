#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"

namespace firmbreak {

enum class ScenarioKind { FixedSlope, FixedNormalization };

std::string_view to_string(ScenarioKind kind) noexcept;
/// Accepts "fs"/"fixed-slope" and "fn"/"fixed-normalization".
ScenarioKind parse_scenario_kind(std::string_view text);

/// Counterfactual histogram after removing the break, keeping the number of
/// firms fixed.
struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::FixedSlope;
  /// Observed histogram with the counts inside `span` replaced.
  SizeHistogram counterfactual;
  SizeRange span;
  /// Fixed-slope rescale factor; exactly 1 for fixed-normalization.
  double alpha = 1.0;
  /// Fixed-normalization slope solution.
  std::optional<double> solved_slope;
  /// Log-space curve before rescaling (the fit, or the solved power law).
  std::vector<double> curve_coefficients;
  std::optional<LogLogFit> fit_used;

  /// total_workers(counterfactual) − total_workers(observed).
  double delta_workers = 0.0;
  double delta_workers_sigma = 0.0;
  /// delta_workers as a percentage of observed workers in span.
  double relative_pct = 0.0;

  /// Σ A·(n_cf − n) split at partition_size: sizes <= partition, sizes above.
  int partition_size = 0;
  double delta_upto_partition = 0.0;
  double delta_above_partition = 0.0;
};

/// Extends `fit` over span and rescales it by α = observed firms / fitted
/// firms. Works for any polynomial degree. `partition` defaults to the top of
/// the fit range.
ScenarioResult fixed_slope(const SizeHistogram& h, const LogLogFit& fit, const SizeRange& span,
                           std::optional<int> partition = std::nullopt);

/// Keeps the count at span.lo and solves (by bisection on [-10, 0]) the slope
/// of the power law through it that conserves the number of firms.
/// `partition` defaults to span.lo.
ScenarioResult fixed_normalization(const SizeHistogram& h, const SizeRange& span,
                                   std::optional<int> partition = std::nullopt);

/// Everything needed to rerun a scenario from a histogram.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::FixedSlope;
  SizeRange fit_range;  // unused by fixed-normalization
  SizeRange span;
  int degree = 1;
  std::optional<int> partition;
};

/// Fits (when needed) and runs one scenario. Fixed-normalization with
/// degree > 1 is an unsupported combination.
ScenarioResult run_scenario(const SizeHistogram& h, const ErrorModel& em, const ScenarioSpec& spec);

inline constexpr int kDefaultMcSamples = 10000;

/// Standard deviation of ΔA_tot over `samples` Gaussian resamplings
/// n → max(0, n + k√n·g) of every bin. Sample i draws from
/// SplitMix64(derive_seed(seed, i)). Resamples on which the pipeline fails
/// are dropped; more than 10% dropped is an instability error.
double delta_uncertainty(const SizeHistogram& h, const ErrorModel& em, const ScenarioSpec& spec,
                         int samples, std::uint64_t seed);

}  // namespace firmbreak
