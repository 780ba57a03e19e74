#include "firmbreak/report.hpp"

#include <cmath>
#include <sstream>

#include "firmbreak/error.hpp"
#include "firmbreak/json_io.hpp"
#include "firmbreak/version.hpp"

namespace firmbreak {

using nlohmann::json;

namespace {

std::string range_tag(const SizeRange& r) {
  return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

ReportFit make_fit(const SizeHistogram& h, std::string id, SizeRange range, int degree,
                   std::vector<int> excluded, const ErrorModel& em) {
  ReportFit f{.id = std::move(id), .range = range, .degree = degree, .excluded = std::move(excluded)};
  try {
    f.fit = fit_excluding(h, range, f.excluded, degree, em);
  } catch (const Error& e) {
    f.error_kind = to_string(e.kind());
    f.error = e.what();
  }
  return f;
}

}  // namespace

json to_json(const ReportConfig& cfg) {
  json ranges = json::array();
  for (const auto& r : cfg.fit_ranges) ranges.push_back(to_json(r));
  return json{
      {"inflation", cfg.inflation},
      {"fit_ranges", ranges},
      {"poly_degrees", cfg.poly_degrees},
      {"poly_fit_range", to_json(cfg.poly_fit_range)},
      {"span", cfg.span ? to_json(*cfg.span) : json(nullptr)},
      {"mc_samples", cfg.mc_samples},
      {"seed", cfg.seed},
      {"ransac", to_json(cfg.ransac)},
  };
}

int Report::succeeded_cells() const {
  int n = 0;
  for (const auto& c : cells) n += c.result.has_value();
  return n;
}

Report build_report(const SizeHistogram& h, const ReportConfig& cfg) {
  const ErrorModel em(cfg.inflation);
  const SizeRange span = cfg.span.value_or(h.span());
  h.slice(span);

  Report rep{.histogram = h, .config = cfg, .span = span};

  rep.fits.push_back(make_fit(h, "single_law", span, 1, {}, em));
  for (const auto& r : cfg.fit_ranges) {
    rep.fits.push_back(make_fit(h, "d1_" + range_tag(r), r, 1, {}, em));
  }
  if (!cfg.fit_ranges.empty()) {
    const auto& r = cfg.fit_ranges.front();
    rep.fits.push_back(make_fit(h, "d1_" + range_tag(r) + "_without_" + std::to_string(r.hi), r, 1,
                                {r.hi}, em));
  }
  for (int d : cfg.poly_degrees) {
    rep.fits.push_back(
        make_fit(h, "d" + std::to_string(d) + "_" + range_tag(cfg.poly_fit_range), cfg.poly_fit_range, d, {}, em));
  }

  try {
    rep.breakpoint = ransac_two_lines(h, em, cfg.ransac);
  } catch (const Error& e) {
    rep.breakpoint_error = e.what();
  }

  // Partial sums split at the top of the first fit range in every cell so rows compare.
  std::optional<int> partition;
  if (!cfg.fit_ranges.empty()) partition = cfg.fit_ranges.front().hi;

  for (const auto& r : cfg.fit_ranges) {
    rep.cells.push_back({.id = "fs_d1_" + range_tag(r),
                         .spec = {ScenarioKind::FixedSlope, r, span, 1, partition}});
  }
  for (int d : cfg.poly_degrees) {
    rep.cells.push_back({.id = "fs_d" + std::to_string(d) + "_" + range_tag(cfg.poly_fit_range),
                         .spec = {ScenarioKind::FixedSlope, cfg.poly_fit_range, span, d, partition}});
  }
  rep.cells.push_back({.id = "fn_d1", .spec = {ScenarioKind::FixedNormalization, span, span, 1, partition}});

  for (auto& cell : rep.cells) {
    try {
      auto result = run_scenario(h, em, cell.spec);
      result.delta_workers_sigma = delta_uncertainty(h, em, cell.spec, cfg.mc_samples, cfg.seed);
      cell.result = std::move(result);
    } catch (const Error& e) {
      cell.error_kind = to_string(e.kind());
      cell.error = e.what();
    }
  }
  return rep;
}

json to_json(const Report& rep) {
  const auto& h = rep.histogram;
  json fits = json::array();
  for (const auto& f : rep.fits) {
    json j{{"id", f.id}, {"range", to_json(f.range)}, {"degree", f.degree}, {"excluded", f.excluded}};
    if (f.fit) {
      j["fit"] = to_json(*f.fit);
    } else {
      j["error"] = {{"kind", f.error_kind}, {"message", f.error}};
    }
    fits.push_back(j);
  }
  json cells = json::array();
  for (const auto& c : rep.cells) {
    json j{{"id", c.id},
           {"kind", to_string(c.spec.kind)},
           {"degree", c.spec.degree},
           {"fit_range", c.spec.kind == ScenarioKind::FixedSlope ? to_json(c.spec.fit_range) : json(nullptr)},
           {"span", to_json(c.spec.span)}};
    if (c.result) {
      j["result"] = to_json(*c.result);
    } else {
      j["error"] = {{"kind", c.error_kind}, {"message", c.error}};
    }
    cells.push_back(j);
  }
  json bins = json::array();
  for (const auto& b : h.bins()) bins.push_back(json::array({b.size, b.count}));

  json out{
      {"command", "report"},
      {"tool", {{"name", "firmbreak"}, {"version", kVersion}}},
      {"label", h.label()},
      {"config", to_json(rep.config)},
      {"span", to_json(rep.span)},
      {"totals",
       {{"firms", total_firms(h, rep.span)}, {"workers", total_workers(h, rep.span)}}},
      {"histogram", bins},
      {"fits", fits},
      {"scenarios", cells},
  };
  if (rep.breakpoint) {
    out["breakpoint"] = to_json(*rep.breakpoint, h);
  } else {
    out["breakpoint"] = {{"error", rep.breakpoint_error}};
  }
  return out;
}

std::string plot_table_tsv(const SizeHistogram& h, const ScenarioResult& result) {
  std::ostringstream out;
  out << "size\tobserved_workers\tfit_workers\tcounterfactual_workers\n";
  for (int a = result.span.lo; a <= result.span.hi; ++a) {
    double fitted = std::pow(10.0, evaluate_log(result.curve_coefficients, std::log10(static_cast<double>(a))));
    out << a << '\t' << format_exact(a * h.count_at(a)) << '\t' << format_exact(a * fitted) << '\t'
        << format_exact(a * result.counterfactual.count_at(a)) << '\n';
  }
  return out.str();
}

}  // namespace firmbreak
