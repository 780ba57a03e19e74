#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"

namespace firmbreak {

struct RansacParams {
  int iterations = 1000;
  /// Residuals beyond this many σ_y are rejected from the consensus.
  double inlier_threshold_sigmas = 2.5;
  std::uint64_t seed = 0;
  int min_segment_points = 3;

  /// Throws a domain error unless iterations >= 1, threshold in [1, 5] and
  /// min_segment_points >= 2.
  void validate() const;
};

enum class BinLabel { Left, Right, Outlier };

enum class BreakStatus {
  Ok,
  /// The two lines cross outside the histogram span.
  Extrapolated,
  /// Refit slopes agree to 1e-12; there is no usable intersection and
  /// break_size holds the split boundary instead.
  Collinear,
};

std::string_view to_string(BinLabel label) noexcept;
std::string_view to_string(BreakStatus status) noexcept;

struct BreakpointResult {
  LogLogFit left_fit;
  LogLogFit right_fit;
  /// Size A* where the two power laws are equal (see status).
  double break_size = 0.0;
  /// One label per histogram bin, in bin order. Zero-count bins are outliers.
  std::vector<BinLabel> assignments;
  /// Inlier count of the winning candidate during the search.
  int consensus_score = 0;
  /// Largest size on the left of the winning candidate split.
  int split_size = 0;
  BreakStatus status = BreakStatus::Ok;
  /// log10 n_right − log10 n_left evaluated at split_size + 0.5. The model
  /// does not force continuity; this reports how far from continuous it is.
  double log_gap_at_split = 0.0;

  double slope_difference() const { return right_fit.slope() - left_fit.slope(); }
  /// σ of the slope difference from the two independent refits.
  double slope_difference_sigma() const;
  /// True when |Δslope| exceeds 3σ of the slope difference.
  bool break_detected() const;
};

/// Size at which two degree-1 fits predict the same count:
/// A* = 10^{(c0₂ − c0₁) / (c1₁ − c1₂)}. Throws no-intersection when the
/// slopes differ by less than 1e-12.
double intersect_lines(const LogLogFit& first, const LogLogFit& second);

/// Two independent straight lines on the log-log plane, found by RANSAC.
///
/// Each iteration draws a split position uniformly among those leaving at
/// least min_segment_points positive bins on each side, samples that many
/// bins per side without replacement, fits a weighted line to each sample
/// and counts bins within threshold·σ_y of their own side's line. The winner
/// has the most inliers; ties go to the smaller summed squared weighted
/// residual of the inliers, then to the lower split. Both sides are then
/// refit on their inliers.
BreakpointResult ransac_two_lines(const SizeHistogram& h, const ErrorModel& em,
                                  const RansacParams& params);

}  // namespace firmbreak
