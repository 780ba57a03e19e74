#include "firmbreak/breakpoint.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "firmbreak/error.hpp"
#include "firmbreak/rng.hpp"

namespace firmbreak {

namespace {

constexpr double kParallelTol = 1e-12;
constexpr int kMinRefitPoints = 3;

struct Point {
  int size;
  double x;
  double y;
  double sigma;
};

struct Candidate {
  std::size_t split = 0;  // first index of the right side, in positive points
  int consensus = -1;
  double residual = std::numeric_limits<double>::infinity();
  std::vector<int> left_sizes;
  std::vector<int> right_sizes;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.consensus != b.consensus) return a.consensus > b.consensus;
  if (a.residual != b.residual) return a.residual < b.residual;
  return a.split < b.split;
}

// Picks `count` distinct indices from [first, last) by partial Fisher-Yates.
std::vector<std::size_t> sample_indices(SplitMix64& rng, std::size_t first, std::size_t last,
                                        std::size_t count) {
  std::vector<std::size_t> pool(last - first);
  std::iota(pool.begin(), pool.end(), first);
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

bool fit_sample(const std::vector<Point>& pts, const std::vector<std::size_t>& idx,
                std::vector<double>& coefficients) {
  std::vector<double> x, y, s;
  for (auto i : idx) {
    x.push_back(pts[i].x);
    y.push_back(pts[i].y);
    s.push_back(pts[i].sigma);
  }
  try {
    coefficients = detail::solve_wls(x, y, s, 1).coefficients;
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

void RansacParams::validate() const {
  if (iterations < 1) throw Error(ErrorKind::Domain, "RANSAC iterations must be >= 1");
  if (!(inlier_threshold_sigmas >= 1.0 && inlier_threshold_sigmas <= 5.0)) {
    throw Error(ErrorKind::Domain, "RANSAC inlier threshold must be in [1, 5] sigma");
  }
  if (min_segment_points < 2) throw Error(ErrorKind::Domain, "min_segment_points must be >= 2");
}

std::string_view to_string(BinLabel label) noexcept {
  switch (label) {
    case BinLabel::Left: return "left";
    case BinLabel::Right: return "right";
    case BinLabel::Outlier: return "outlier";
  }
  return "outlier";
}

std::string_view to_string(BreakStatus status) noexcept {
  switch (status) {
    case BreakStatus::Ok: return "ok";
    case BreakStatus::Extrapolated: return "extrapolated";
    case BreakStatus::Collinear: return "collinear";
  }
  return "ok";
}

double BreakpointResult::slope_difference_sigma() const {
  return std::sqrt(left_fit.cov(1, 1) + right_fit.cov(1, 1));
}

bool BreakpointResult::break_detected() const {
  return std::fabs(slope_difference()) > 3.0 * slope_difference_sigma();
}

double intersect_lines(const LogLogFit& first, const LogLogFit& second) {
  if (first.degree != 1 || second.degree != 1) {
    throw Error(ErrorKind::Domain, "intersect_lines needs two degree-1 fits");
  }
  double dslope = first.slope() - second.slope();
  if (std::fabs(dslope) < kParallelTol) {
    throw Error(ErrorKind::NoIntersection, "lines are parallel");
  }
  return std::pow(10.0, (second.intercept() - first.intercept()) / dslope);
}

BreakpointResult ransac_two_lines(const SizeHistogram& h, const ErrorModel& em,
                                  const RansacParams& params) {
  params.validate();
  const auto m = static_cast<std::size_t>(params.min_segment_points);

  std::vector<Point> pts;
  for (const auto& b : h.bins()) {
    if (b.count > 0.0) {
      pts.push_back({b.size, std::log10(static_cast<double>(b.size)), std::log10(b.count),
                     detail::log_sigma(b.count, em)});
    }
  }
  if (pts.size() < 2 * m) {
    throw Error(ErrorKind::Underdetermined,
                "RANSAC needs at least " + std::to_string(2 * m) + " bins with positive counts");
  }

  SplitMix64 rng(params.seed);
  const std::size_t n_splits = pts.size() - 2 * m + 1;
  const double thr = params.inlier_threshold_sigmas;
  Candidate best;
  std::vector<double> left_line, right_line;

  for (int it = 0; it < params.iterations; ++it) {
    const std::size_t split = m + static_cast<std::size_t>(rng.below(n_splits));
    auto left_idx = sample_indices(rng, 0, split, m);
    auto right_idx = sample_indices(rng, split, pts.size(), m);
    if (!fit_sample(pts, left_idx, left_line) || !fit_sample(pts, right_idx, right_line)) continue;

    Candidate c;
    c.split = split;
    c.residual = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& line = i < split ? left_line : right_line;
      double r = (pts[i].y - evaluate_log(line, pts[i].x)) / pts[i].sigma;
      if (std::fabs(r) <= thr) {
        (i < split ? c.left_sizes : c.right_sizes).push_back(pts[i].size);
        c.residual += r * r;
      }
    }
    if (static_cast<int>(c.left_sizes.size()) < kMinRefitPoints ||
        static_cast<int>(c.right_sizes.size()) < kMinRefitPoints) {
      continue;
    }
    c.consensus = static_cast<int>(c.left_sizes.size() + c.right_sizes.size());
    if (better(c, best)) best = std::move(c);
  }
  if (best.consensus < 0) {
    throw Error(ErrorKind::Underdetermined,
                "no RANSAC candidate left 3 inliers on both sides of the split");
  }

  BreakpointResult out;
  out.left_fit = fit_sizes(h, best.left_sizes, 1, em);
  out.right_fit = fit_sizes(h, best.right_sizes, 1, em);
  out.consensus_score = best.consensus;
  out.split_size = pts[best.split - 1].size;
  const double boundary = out.split_size + 0.5;
  out.log_gap_at_split = evaluate_log(out.right_fit.coefficients, std::log10(boundary)) -
                         evaluate_log(out.left_fit.coefficients, std::log10(boundary));

  const auto span = h.span();
  if (std::fabs(out.slope_difference()) < kParallelTol) {
    out.status = BreakStatus::Collinear;
    out.break_size = boundary;
  } else {
    out.break_size = intersect_lines(out.left_fit, out.right_fit);
    if (!(out.break_size > span.lo && out.break_size < span.hi)) out.status = BreakStatus::Extrapolated;
  }

  out.assignments.assign(h.size(), BinLabel::Outlier);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& b = h.bins()[i];
    if (!(b.count > 0.0)) continue;
    bool left_side;
    if (out.status == BreakStatus::Ok) {
      // Label relative to A*; a size sitting exactly on A* goes to the closer line.
      if (b.size < out.break_size) {
        left_side = true;
      } else if (b.size > out.break_size) {
        left_side = false;
      } else {
        double x = std::log10(static_cast<double>(b.size));
        left_side = std::fabs(std::log10(b.count) - evaluate_log(out.left_fit.coefficients, x)) <=
                    std::fabs(std::log10(b.count) - evaluate_log(out.right_fit.coefficients, x));
      }
    } else {
      left_side = b.size <= out.split_size;
    }
    const auto& fit = left_side ? out.left_fit : out.right_fit;
    double x = std::log10(static_cast<double>(b.size));
    double r = (std::log10(b.count) - evaluate_log(fit.coefficients, x)) /
               detail::log_sigma(b.count, em);
    if (std::fabs(r) <= thr) out.assignments[i] = left_side ? BinLabel::Left : BinLabel::Right;
  }
  return out;
}

}  // namespace firmbreak
