#include "firmbreak/json_io.hpp"

namespace firmbreak {

using nlohmann::json;

json to_json(const SizeRange& r) { return json::array({r.lo, r.hi}); }

json to_json(const LogLogFit& fit) {
  json out{
      {"degree", fit.degree},
      {"coefficients", fit.coefficients},
      {"covariance", fit.covariance},
      {"chi2", fit.chi2},
      {"dof", fit.dof},
      {"p_value", fit.p_value},
      {"fit_range", to_json(fit.fit_range)},
      {"sizes", fit.sizes},
  };
  json errors = json::array();
  for (int j = 0; j <= fit.degree; ++j) errors.push_back(fit.stderr_of(j));
  out["coefficient_errors"] = errors;
  return out;
}

json to_json(const BreakpointResult& r, const SizeHistogram& h) {
  json labels = json::array();
  for (std::size_t i = 0; i < r.assignments.size(); ++i) {
    labels.push_back({{"size", h.bins()[i].size}, {"label", to_string(r.assignments[i])}});
  }
  return json{
      {"left_fit", to_json(r.left_fit)},
      {"right_fit", to_json(r.right_fit)},
      {"break_size", r.break_size},
      {"status", to_string(r.status)},
      {"split_size", r.split_size},
      {"consensus_score", r.consensus_score},
      {"log_gap_at_split", r.log_gap_at_split},
      {"slope_difference", r.slope_difference()},
      {"slope_difference_sigma", r.slope_difference_sigma()},
      {"break_detected", r.break_detected()},
      {"assignments", labels},
  };
}

json to_json(const ScenarioResult& r) {
  json out{
      {"kind", to_string(r.kind)},
      {"span", to_json(r.span)},
      {"alpha", r.alpha},
      {"solved_slope", r.solved_slope ? json(*r.solved_slope) : json(nullptr)},
      {"curve_coefficients", r.curve_coefficients},
      {"delta_workers", r.delta_workers},
      {"delta_workers_sigma", r.delta_workers_sigma},
      {"relative_pct", r.relative_pct},
      {"partition_size", r.partition_size},
      {"delta_upto_partition", r.delta_upto_partition},
      {"delta_above_partition", r.delta_above_partition},
      {"total_firms", total_firms(r.counterfactual, r.span)},
      {"total_workers", total_workers(r.counterfactual, r.span)},
  };
  out["fit_used"] = r.fit_used ? to_json(*r.fit_used) : json(nullptr);
  return out;
}

json to_json(const RansacParams& p) {
  return json{
      {"iterations", p.iterations},
      {"inlier_threshold_sigmas", p.inlier_threshold_sigmas},
      {"seed", p.seed},
      {"min_segment_points", p.min_segment_points},
  };
}

}  // namespace firmbreak
