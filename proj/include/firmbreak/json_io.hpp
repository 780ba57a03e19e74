#pragma once

#include <json.hpp>

#include "firmbreak/breakpoint.hpp"
#include "firmbreak/counterfactual.hpp"
#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"

namespace firmbreak {

nlohmann::json to_json(const SizeRange& r);
nlohmann::json to_json(const LogLogFit& fit);
nlohmann::json to_json(const BreakpointResult& result, const SizeHistogram& h);
/// Omits the counterfactual counts; those go to CSV/TSV.
nlohmann::json to_json(const ScenarioResult& result);
nlohmann::json to_json(const RansacParams& params);

}  // namespace firmbreak
