// firmbreak: break detection and counterfactual redistribution for
// size-frequency histograms.
//
// Exit codes: 0 success, 2 input error, 3 numerical/degenerate error,
// 4 unsupported combination.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "firmbreak/breakpoint.hpp"
#include "firmbreak/counterfactual.hpp"
#include "firmbreak/error.hpp"
#include "firmbreak/fitting.hpp"
#include "firmbreak/histogram.hpp"
#include "firmbreak/json_io.hpp"
#include "firmbreak/report.hpp"
#include "firmbreak/synth.hpp"
#include "firmbreak/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace firmbreak;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUnsupported = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::MalformedInput:
    case ErrorKind::DuplicateBin:
    case ErrorKind::NonContiguous:
    case ErrorKind::Domain:
    case ErrorKind::Range:
    case ErrorKind::InvalidSpec:
      return kExitInput;
    case ErrorKind::Unsupported:
      return kExitUnsupported;
    default:
      return kExitNumerical;
  }
}

std::string sig6(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

json tool_json() { return {{"name", "firmbreak"}, {"version", kVersion}}; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<SizeRange> parse_range_list(const std::string& text) {
  std::vector<SizeRange> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_size_range(item));
  }
  return out;
}

struct FitArgs {
  std::string input;
  std::string range;
  int degree = 1;
  double inflation = 1.0;
  std::vector<int> exclude;
  std::string out;
};

int cmd_fit(const FitArgs& a) {
  auto h = load_histogram(a.input);
  SizeRange range = a.range.empty() ? h.span() : parse_size_range(a.range);
  ErrorModel em(a.inflation);
  auto fit = fit_excluding(h, range, a.exclude, a.degree, em);

  std::cout << "dataset  " << h.label() << "\n"
            << "range    " << format_size_range(range) << "\n"
            << "degree   " << fit.degree << "\n";
  if (fit.degree == 1) {
    std::cout << "log10 normalization  " << fixed6(fit.intercept()) << " +/- " << sig6(fit.stderr_of(0)) << "\n"
              << "slope                " << fixed6(fit.slope()) << " +/- " << sig6(fit.stderr_of(1)) << "\n";
  } else {
    for (int j = 0; j <= fit.degree; ++j) {
      std::cout << "c" << j << "  " << fixed6(fit.coefficients[static_cast<std::size_t>(j)]) << " +/- "
                << sig6(fit.stderr_of(j)) << "\n";
    }
  }
  std::cout << "chi2/dof " << sig6(fit.chi2) << "/" << fit.dof << " = " << sig6(fit.reduced_chi2()) << "\n"
            << "p-value  " << sig6(fit.p_value) << "\n";

  if (!a.out.empty()) {
    json j{{"command", "fit"},
           {"tool", tool_json()},
           {"label", h.label()},
           {"config",
            {{"input", a.input}, {"range", to_json(range)}, {"degree", a.degree}, {"inflation", a.inflation}, {"exclude", a.exclude}}},
           {"fit", to_json(fit)}};
    write_text(a.out, dump(j));
  }
  return 0;
}

struct BreakArgs {
  std::string input;
  double inflation = 1.0;
  RansacParams ransac;
  std::string out;
};

int cmd_breakpoint(const BreakArgs& a) {
  auto h = load_histogram(a.input);
  ErrorModel em(a.inflation);
  auto r = ransac_two_lines(h, em, a.ransac);

  std::cout << "dataset          " << h.label() << "\n"
            << "break size A*    " << sig6(r.break_size) << " (" << to_string(r.status) << ")\n"
            << "split            " << r.split_size << "|" << r.split_size + 1 << "\n"
            << "left slope       " << fixed6(r.left_fit.slope()) << " +/- " << sig6(r.left_fit.stderr_of(1))
            << "  on " << format_size_range(r.left_fit.fit_range) << "\n"
            << "right slope      " << fixed6(r.right_fit.slope()) << " +/- " << sig6(r.right_fit.stderr_of(1))
            << "  on " << format_size_range(r.right_fit.fit_range) << "\n"
            << "consensus        " << r.consensus_score << "/" << h.size() << "\n"
            << "log gap at split " << sig6(r.log_gap_at_split) << "\n"
            << "break_detected=" << (r.break_detected() ? "true" : "false") << "\n"
            << "assignments     ";
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::cout << ' ' << h.bins()[i].size << ':' << to_string(r.assignments[i]).substr(0, 1);
  }
  std::cout << "\n";

  if (!a.out.empty()) {
    json j{{"command", "breakpoint"},
           {"tool", tool_json()},
           {"label", h.label()},
           {"config", {{"input", a.input}, {"inflation", a.inflation}, {"ransac", to_json(a.ransac)}}},
           {"breakpoint", to_json(r, h)}};
    write_text(a.out, dump(j));
  }
  return 0;
}

struct ScenarioArgs {
  std::string input;
  std::string kind = "fs";
  std::string range;
  std::string span;
  int degree = 1;
  double inflation = 1.0;
  int mc_samples = kDefaultMcSamples;
  std::uint64_t seed = 0;
  std::string out;
  std::string counterfactual;
};

int cmd_scenario(const ScenarioArgs& a) {
  auto h = load_histogram(a.input);
  ErrorModel em(a.inflation);
  ScenarioSpec spec;
  spec.kind = parse_scenario_kind(a.kind);
  spec.span = a.span.empty() ? h.span() : parse_size_range(a.span);
  spec.degree = a.degree;
  if (spec.kind == ScenarioKind::FixedSlope) {
    if (a.range.empty()) throw Error(ErrorKind::MalformedInput, "fixed-slope needs --range lo:hi");
    spec.fit_range = parse_size_range(a.range);
  } else {
    spec.fit_range = spec.span;
  }

  auto result = run_scenario(h, em, spec);
  result.delta_workers_sigma = delta_uncertainty(h, em, spec, a.mc_samples, a.seed);

  std::cout << "dataset       " << h.label() << "\n"
            << "scenario      " << to_string(spec.kind) << " degree " << spec.degree;
  if (spec.kind == ScenarioKind::FixedSlope) std::cout << " fit " << format_size_range(spec.fit_range);
  std::cout << " span " << format_size_range(spec.span) << "\n";
  if (spec.kind == ScenarioKind::FixedSlope) {
    std::cout << "alpha         " << sig6(result.alpha) << "\n";
  } else {
    std::cout << "solved slope  " << fixed6(*result.solved_slope) << "\n";
  }
  std::cout << "delta workers " << sig6(result.delta_workers) << " +/- " << sig6(result.delta_workers_sigma) << "\n"
            << "relative      " << sig6(result.relative_pct) << "%\n"
            << "  sizes <= " << result.partition_size << ": " << sig6(result.delta_upto_partition) << "\n"
            << "  sizes >  " << result.partition_size << ": " << sig6(result.delta_above_partition) << "\n";

  fs::path cf_path = a.counterfactual;
  if (cf_path.empty() && !a.out.empty()) {
    cf_path = fs::path(a.out).replace_extension(".counterfactual.csv");
  }
  if (!a.out.empty()) {
    json j{{"command", "scenario"},
           {"tool", tool_json()},
           {"label", h.label()},
           {"config",
            {{"input", a.input},
             {"kind", to_string(spec.kind)},
             {"fit_range", spec.kind == ScenarioKind::FixedSlope ? to_json(spec.fit_range) : json(nullptr)},
             {"span", to_json(spec.span)},
             {"degree", spec.degree},
             {"inflation", a.inflation},
             {"mc_samples", a.mc_samples},
             {"seed", a.seed}}},
           {"scenario", to_json(result)}};
    write_text(a.out, dump(j));
  }
  if (!cf_path.empty()) save_histogram(cf_path, result.counterfactual);
  return 0;
}

struct ReportArgs {
  std::string input;
  std::string fit_ranges = "5:15,5:14,5:13";
  std::string poly_range = "5:14";
  std::vector<int> degrees = {2, 3, 4};
  std::string span;
  double inflation = 1.0;
  int mc_samples = kDefaultMcSamples;
  std::uint64_t seed = 0;
  RansacParams ransac;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  auto h = load_histogram(a.input);
  ReportConfig cfg;
  cfg.inflation = a.inflation;
  cfg.fit_ranges = parse_range_list(a.fit_ranges);
  cfg.poly_degrees = a.degrees;
  cfg.poly_fit_range = parse_size_range(a.poly_range);
  if (!a.span.empty()) cfg.span = parse_size_range(a.span);
  cfg.mc_samples = a.mc_samples;
  cfg.seed = a.seed;
  cfg.ransac = a.ransac;
  cfg.ransac.validate();

  auto rep = build_report(h, cfg);
  auto j = to_json(rep);
  j["config"]["input"] = a.input;

  if (a.out.empty()) {
    std::cout << dump(j);
  } else {
    fs::path dir(a.out);
    fs::create_directories(dir);
    write_text(dir / "report.json", dump(j));
    for (const auto& cell : rep.cells) {
      if (cell.result) write_text(dir / ("plot_" + cell.id + ".tsv"), plot_table_tsv(h, *cell.result));
    }
    std::cout << "dataset " << h.label() << ", span " << format_size_range(rep.span) << "\n";
    for (const auto& cell : rep.cells) {
      std::cout << "  " << std::left << std::setw(14) << cell.id;
      if (cell.result) {
        std::cout << sig6(cell.result->delta_workers) << " +/- " << sig6(cell.result->delta_workers_sigma) << "  ("
                  << sig6(cell.result->relative_pct) << "%)\n";
      } else {
        std::cout << "failed: " << cell.error << "\n";
      }
    }
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
  }
  return rep.succeeded_cells() > 0 ? 0 : kExitNumerical;
}

struct SynthArgs {
  std::string span;
  std::vector<std::string> segments;
  double join = 0.0;
  std::string calibrate;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string label = "synthetic";
  std::string out;
};

std::vector<std::string> split_fields(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::MalformedInput, "bad number '" + text + "'");
}

int cmd_synth(const SynthArgs& a) {
  synth::GeneratorSpec spec;
  spec.span = parse_size_range(a.span);
  if (!a.calibrate.empty()) {
    // firms,workers,last_left,left_slope,right_slope
    auto f = split_fields(a.calibrate);
    if (f.size() != 5) {
      throw Error(ErrorKind::MalformedInput, "--calibrate expects firms,workers,last_left,left_slope,right_slope");
    }
    spec = synth::calibrate_to_totals(spec.span, static_cast<int>(parse_number(f[2])), parse_number(f[3]),
                                      parse_number(f[4]), parse_number(f[0]), parse_number(f[1]));
  } else {
    for (const auto& text : a.segments) {
      // lo:hi,log10_norm,slope; log10_norm "cont" continues the previous segment
      auto f = split_fields(text);
      if (f.size() != 3) throw Error(ErrorKind::MalformedInput, "--segment expects lo:hi,log10_norm,slope");
      synth::Segment seg{parse_size_range(f[0]), 0.0, parse_number(f[2])};
      if (f[1] == "cont") {
        if (spec.segments.empty()) throw Error(ErrorKind::InvalidSpec, "first segment cannot use 'cont'");
        const auto& prev = spec.segments.back();
        double join = a.join > 0.0 ? a.join : prev.range.hi;
        seg.log10_norm = synth::continuity_intercept(prev.log10_norm, prev.slope, seg.slope, join);
      } else {
        seg.log10_norm = parse_number(f[1]);
      }
      spec.segments.push_back(seg);
    }
  }
  if (a.noise > 0.0) spec.noise = ErrorModel(a.noise);
  spec.seed = a.seed;
  spec.label = a.label;
  auto h = synth::generate(spec);
  if (a.out.empty()) {
    write_histogram_csv(std::cout, h);
  } else {
    save_histogram(a.out, h);
  }
  return 0;
}

void add_ransac_flags(CLI::App* cmd, RansacParams& p) {
  cmd->add_option("--ransac-iters", p.iterations, "RANSAC iterations")->capture_default_str();
  cmd->add_option("--ransac-threshold", p.inlier_threshold_sigmas, "inlier threshold in sigma")
      ->capture_default_str();
  cmd->add_option("--min-segment", p.min_segment_points, "bins sampled per side")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Break detection and counterfactual redistribution for size-frequency histograms"};
  app.set_version_flag("--version", std::string("firmbreak ") + kVersion);
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "weighted least-squares fit in log-log space");
  fit->add_option("input", fit_args.input, "histogram CSV")->required();
  fit->add_option("--range", fit_args.range, "fit range lo:hi (default: whole span)");
  fit->add_option("--degree", fit_args.degree, "polynomial degree 1-4")->capture_default_str();
  fit->add_option("--inflation", fit_args.inflation, "Poisson error inflation k")->capture_default_str();
  fit->add_option("--exclude", fit_args.exclude, "sizes to leave out of the fit");
  fit->add_option("--out", fit_args.out, "write JSON here");

  BreakArgs break_args;
  auto* brk = app.add_subcommand("breakpoint", "two-line RANSAC break detection");
  brk->add_option("input", break_args.input, "histogram CSV")->required();
  brk->add_option("--inflation", break_args.inflation, "Poisson error inflation k")->capture_default_str();
  brk->add_option("--seed", break_args.ransac.seed, "RANSAC seed")->capture_default_str();
  add_ransac_flags(brk, break_args.ransac);
  brk->add_option("--out", break_args.out, "write JSON here");

  ScenarioArgs sc_args;
  auto* sc = app.add_subcommand("scenario", "counterfactual scenario with Monte Carlo uncertainty");
  sc->add_option("input", sc_args.input, "histogram CSV")->required();
  sc->add_option("--kind", sc_args.kind, "fs (fixed slope) or fn (fixed normalization)")
      ->check(CLI::IsMember({"fs", "fn"}))
      ->capture_default_str();
  sc->add_option("--range", sc_args.range, "fit range lo:hi (fixed slope)");
  sc->add_option("--span", sc_args.span, "scenario span lo:hi (default: whole histogram)");
  sc->add_option("--degree", sc_args.degree, "fit degree 1-4")->capture_default_str();
  sc->add_option("--inflation", sc_args.inflation, "Poisson error inflation k")->capture_default_str();
  sc->add_option("--mc-samples", sc_args.mc_samples, "Monte Carlo resamples")->capture_default_str();
  sc->add_option("--seed", sc_args.seed, "Monte Carlo seed")->capture_default_str();
  sc->add_option("--out", sc_args.out, "write JSON here (counterfactual CSV goes next to it)");
  sc->add_option("--counterfactual", sc_args.counterfactual, "write the counterfactual CSV here");

  ReportArgs rep_args;
  auto* rep = app.add_subcommand("report", "full scenario matrix, JSON and plot tables");
  rep->add_option("input", rep_args.input, "histogram CSV")->required();
  rep->add_option("--fit-ranges", rep_args.fit_ranges, "comma-separated degree-1 fit ranges")
      ->capture_default_str();
  rep->add_option("--range", rep_args.poly_range, "fit range for higher-order fits")->capture_default_str();
  rep->add_option("--degrees", rep_args.degrees, "higher polynomial orders")->delimiter(',');
  rep->add_option("--span", rep_args.span, "scenario span lo:hi (default: whole histogram)");
  rep->add_option("--inflation", rep_args.inflation, "Poisson error inflation k")->capture_default_str();
  rep->add_option("--mc-samples", rep_args.mc_samples, "Monte Carlo resamples per cell")->capture_default_str();
  rep->add_option("--seed", rep_args.seed, "seed for Monte Carlo and RANSAC")->capture_default_str();
  add_ransac_flags(rep, rep_args.ransac);
  rep->add_option("--out", rep_args.out, "output directory (default: JSON to stdout)");

  SynthArgs syn_args;
  auto* syn = app.add_subcommand("synth", "generate a synthetic histogram CSV");
  syn->add_option("--span", syn_args.span, "size span lo:hi")->required();
  syn->add_option("--segment", syn_args.segments, "lo:hi,log10_norm|cont,slope (repeatable)");
  syn->add_option("--join", syn_args.join, "join size for 'cont' segments (default: end of previous)");
  syn->add_option("--calibrate", syn_args.calibrate,
                  "firms,workers,last_left,left_slope,right_slope: two segments matched to totals");
  syn->add_option("--noise", syn_args.noise, "Gaussian-Poisson noise with inflation k (0 = none)")
      ->capture_default_str();
  syn->add_option("--seed", syn_args.seed, "noise seed")->capture_default_str();
  syn->add_option("--label", syn_args.label, "dataset label")->capture_default_str();
  syn->add_option("--out", syn_args.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    rep_args.ransac.seed = rep_args.seed;
    if (fit->parsed()) return cmd_fit(fit_args);
    if (brk->parsed()) return cmd_breakpoint(break_args);
    if (sc->parsed()) return cmd_scenario(sc_args);
    if (rep->parsed()) return cmd_report(rep_args);
    if (syn->parsed()) return cmd_synth(syn_args);
  } catch (const Error& e) {
    std::cerr << "firmbreak: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "firmbreak: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
