#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"

namespace firmbreak::synth {

/// Power law n(A) = 10^log10_norm · A^slope over `range`.
struct Segment {
  SizeRange range;
  double log10_norm = 0.0;
  double slope = 0.0;
};

struct GeneratorSpec {
  SizeRange span;
  /// Must tile span in order, without gaps or overlap.
  std::vector<Segment> segments;
  /// Gaussian approximation of Poisson noise, n + k√n·g, truncated at 0.
  std::optional<ErrorModel> noise;
  std::uint64_t seed = 0;
  std::string label = "synthetic";
};

/// Deterministic per spec. Noise draws one SplitMix64(seed) normal per bin,
/// in ascending size order.
SizeHistogram generate(const GeneratorSpec& spec);

/// Intercept of a segment with `right_slope` that meets the left power law
/// (left_norm, left_slope) at size `join`.
double continuity_intercept(double left_norm, double left_slope, double right_slope, double join);

/// Two segments [span.lo, last_left] and [last_left+1, span.hi], continuous
/// at `join`.
GeneratorSpec broken_law(const SizeRange& span, int last_left, double log10_norm, double left_slope,
                         double right_slope, double join);

/// Two segments with the given slopes whose intercepts are set so that the
/// histogram holds exactly `firms` entities and `workers` workers. The join
/// is generally discontinuous.
GeneratorSpec calibrate_to_totals(const SizeRange& span, int last_left, double left_slope,
                                  double right_slope, double firms, double workers);

}  // namespace firmbreak::synth
