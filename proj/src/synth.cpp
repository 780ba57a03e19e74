#include "firmbreak/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "firmbreak/error.hpp"
#include "firmbreak/rng.hpp"

namespace firmbreak::synth {

namespace {

void validate(const GeneratorSpec& spec) {
  if (spec.span.lo < 1 || spec.span.lo > spec.span.hi) {
    throw Error(ErrorKind::InvalidSpec, "generator span must satisfy 1 <= lo <= hi");
  }
  if (spec.segments.empty()) throw Error(ErrorKind::InvalidSpec, "generator has no segments");
  int next = spec.span.lo;
  for (const auto& seg : spec.segments) {
    if (seg.range.lo != next || seg.range.hi < seg.range.lo) {
      throw Error(ErrorKind::InvalidSpec, "segments must tile the span in order; segment " +
                                              format_size_range(seg.range) + " does not start at " +
                                              std::to_string(next));
    }
    if (!std::isfinite(seg.log10_norm) || !std::isfinite(seg.slope)) {
      throw Error(ErrorKind::InvalidSpec, "segment parameters must be finite");
    }
    next = seg.range.hi + 1;
  }
  if (next != spec.span.hi + 1) {
    throw Error(ErrorKind::InvalidSpec, "segments do not reach the end of the span");
  }
}

}  // namespace

SizeHistogram generate(const GeneratorSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  std::vector<SizeBin> bins;
  for (const auto& seg : spec.segments) {
    for (int a = seg.range.lo; a <= seg.range.hi; ++a) {
      double n = std::pow(10.0, seg.log10_norm + seg.slope * std::log10(static_cast<double>(a)));
      if (spec.noise) n = std::max(0.0, n + spec.noise->sigma(n) * rng.normal());
      bins.push_back({a, n});
    }
  }
  return SizeHistogram(std::move(bins), spec.label);
}

double continuity_intercept(double left_norm, double left_slope, double right_slope, double join) {
  return left_norm + (left_slope - right_slope) * std::log10(join);
}

GeneratorSpec broken_law(const SizeRange& span, int last_left, double log10_norm, double left_slope,
                         double right_slope, double join) {
  GeneratorSpec spec;
  spec.span = span;
  spec.segments = {
      {{span.lo, last_left}, log10_norm, left_slope},
      {{last_left + 1, span.hi}, continuity_intercept(log10_norm, left_slope, right_slope, join),
       right_slope},
  };
  return spec;
}

GeneratorSpec calibrate_to_totals(const SizeRange& span, int last_left, double left_slope,
                                  double right_slope, double firms, double workers) {
  // firms = a·L0 + b·R0, workers = a·L1 + b·R1 with a = 10^c_left, b = 10^c_right.
  double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
  for (int a = span.lo; a <= span.hi; ++a) {
    if (a <= last_left) {
      double v = std::pow(a, left_slope);
      l0 += v;
      l1 += a * v;
    } else {
      double v = std::pow(a, right_slope);
      r0 += v;
      r1 += a * v;
    }
  }
  double det = l0 * r1 - r0 * l1;
  double left_scale = (firms * r1 - r0 * workers) / det;
  double right_scale = (l0 * workers - l1 * firms) / det;
  if (!(left_scale > 0.0) || !(right_scale > 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "totals cannot be matched with positive counts");
  }
  GeneratorSpec spec;
  spec.span = span;
  spec.segments = {
      {{span.lo, last_left}, std::log10(left_scale), left_slope},
      {{last_left + 1, span.hi}, std::log10(right_scale), right_slope},
  };
  return spec;
}

}  // namespace firmbreak::synth
