#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "firmbreak/report.hpp"
#include "firmbreak/synth.hpp"

using namespace firmbreak;

namespace {

SizeHistogram broken(std::uint64_t seed) {
  auto spec = synth::broken_law({5, 25}, 15, 5.838, -1.645, -2.34, 15.0);
  spec.noise = ErrorModel(1.0);
  spec.seed = seed;
  return synth::generate(spec);
}

ReportConfig quick() {
  ReportConfig cfg;
  cfg.mc_samples = 200;
  cfg.ransac.iterations = 300;
  return cfg;
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("report on a broken law fills the 7-cell matrix") {
  auto h = broken(1);
  auto rep = build_report(h, quick());
  REQUIRE(rep.cells.size() == 7);
  CHECK(rep.succeeded_cells() == 7);
  for (const auto& c : rep.cells) {
    CHECK(c.result->delta_workers > 0.0);
    CHECK(c.result->delta_workers_sigma > 0.0);
  }
  CHECK(rep.cells[0].id == "fs_d1_5-15");
  CHECK(rep.cells[3].id == "fs_d2_5-14");
  CHECK(rep.cells[6].id == "fn_d1");
  REQUIRE(rep.breakpoint.has_value());
  CHECK(rep.breakpoint->break_detected());

  auto j = to_json(rep);
  CHECK(j["scenarios"].size() == 7);
  CHECK(j["fits"].size() == 8);
  CHECK(j["fits"][4]["id"] == "d1_5-15_without_15");
  CHECK(j["fits"][4]["fit"]["dof"] == j["fits"][1]["fit"]["dof"].get<int>() - 1);
  CHECK(j["config"]["mc_samples"] == 200);
  CHECK(j["totals"]["firms"].get<double>() == doctest::Approx(total_firms(h, {5, 25})));
}

TEST_CASE("report on a single law gives zero gains") {
  synth::GeneratorSpec spec;
  spec.span = {5, 25};
  spec.segments = {{{5, 25}, 5.838, -1.82}};
  auto h = synth::generate(spec);
  auto rep = build_report(h, quick());
  double workers = total_workers(h, h.span());
  for (const auto& c : rep.cells) {
    REQUIRE(c.result.has_value());
    CHECK(std::fabs(c.result->delta_workers) < 1e-9 * workers);
  }
  CHECK_FALSE(rep.breakpoint->break_detected());
}

TEST_CASE("failing cells are recorded, not fatal") {
  auto h = broken(2);
  auto cfg = quick();
  cfg.fit_ranges = {{5, 15}, {5, 6}};
  auto rep = build_report(h, cfg);
  CHECK(rep.cells.size() == 6);
  CHECK(rep.succeeded_cells() == 5);
  CHECK(rep.cells[1].error_kind == "underdetermined");
  auto j = to_json(rep);
  CHECK(j["scenarios"][1]["error"]["kind"] == "underdetermined");
}

TEST_CASE("report output is deterministic") {
  auto h = broken(3);
  auto a = to_json(build_report(h, quick())).dump();
  auto b = to_json(build_report(h, quick())).dump();
  CHECK(a == b);
}

TEST_CASE("plot table has one row per size") {
  auto h = broken(4);
  auto rep = build_report(h, quick());
  for (const auto& c : rep.cells) {
    auto tsv = plot_table_tsv(h, *c.result);
    CHECK(lines(tsv) == 1 + static_cast<std::size_t>(h.span().length()));
    CHECK(tsv.rfind("size\tobserved_workers\tfit_workers\tcounterfactual_workers\n", 0) == 0);
  }
}
