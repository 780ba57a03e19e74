#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "firmbreak/breakpoint.hpp"
#include "firmbreak/counterfactual.hpp"
#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"

namespace firmbreak {

struct ReportConfig {
  double inflation = 1.0;
  /// Degree-1 fixed-slope cells, one per range.
  std::vector<SizeRange> fit_ranges = {{5, 15}, {5, 14}, {5, 13}};
  /// Fixed-slope cells with higher-order fits on poly_fit_range.
  std::vector<int> poly_degrees = {2, 3, 4};
  SizeRange poly_fit_range = {5, 14};
  /// Scenario span; the whole histogram when unset.
  std::optional<SizeRange> span;
  int mc_samples = kDefaultMcSamples;
  std::uint64_t seed = 0;
  RansacParams ransac;
};

nlohmann::json to_json(const ReportConfig& cfg);

struct ReportCell {
  std::string id;
  ScenarioSpec spec;
  std::optional<ScenarioResult> result;
  std::string error_kind;
  std::string error;
};

struct ReportFit {
  std::string id;
  SizeRange range;
  int degree = 1;
  std::vector<int> excluded;
  std::optional<LogLogFit> fit;
  std::string error_kind;
  std::string error;
};

/// Full scenario matrix for one histogram. Cells and fits that fail record
/// their error instead of aborting the report.
struct Report {
  SizeHistogram histogram;
  ReportConfig config;
  SizeRange span;
  std::vector<ReportFit> fits;
  std::optional<BreakpointResult> breakpoint;
  std::string breakpoint_error;
  std::vector<ReportCell> cells;

  int succeeded_cells() const;
};

Report build_report(const SizeHistogram& h, const ReportConfig& cfg);

nlohmann::json to_json(const Report& report);

/// Tab-separated plot table for one cell: size, observed_workers,
/// fit_workers, counterfactual_workers; one row per size in the span.
std::string plot_table_tsv(const SizeHistogram& h, const ScenarioResult& result);

}  // namespace firmbreak
