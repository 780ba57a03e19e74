#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "firmbreak/error.hpp"
#include "firmbreak/fitting.hpp"
#include "firmbreak/rng.hpp"
#include "firmbreak/synth.hpp"

using namespace firmbreak;

namespace {

constexpr double kNorm = 5.838;
constexpr double kSlope = -1.645;

SizeHistogram power_law(SizeRange span, double c, double s) {
  synth::GeneratorSpec spec;
  spec.span = span;
  spec.segments = {{span, c, s}};
  return synth::generate(spec);
}

SizeHistogram noisy_power_law(SizeRange span, double c, double s, std::uint64_t seed, double k = 1.0) {
  synth::GeneratorSpec spec;
  spec.span = span;
  spec.segments = {{span, c, s}};
  spec.noise = ErrorModel(k);
  spec.seed = seed;
  return synth::generate(spec);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

// Brute-force χ² minimum over (c0, c1): zooming grid, independent of the WLS solver.
double grid_min_chi2(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& sigma, double& c0, double& c1) {
  auto chi2 = [&](double a, double b) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = (y[i] - a - b * x[i]) / sigma[i];
      s += r * r;
    }
    return s;
  };
  c0 = 0.0;
  c1 = 0.0;
  double half = 20.0;
  double best = chi2(c0, c1);
  while (half > 1e-9) {
    double bc0 = c0, bc1 = c1;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        double a = c0 + half * i / 20.0, b = c1 + half * j / 20.0;
        double v = chi2(a, b);
        if (v < best) {
          best = v;
          bc0 = a;
          bc1 = b;
        }
      }
    }
    c0 = bc0;
    c1 = bc1;
    half *= 0.25;
  }
  return best;
}

}  // namespace

TEST_CASE("sigma_counts") {
  SizeHistogram h({{1, 100}, {2, 25}, {3, 0}});
  auto s1 = sigma_counts(h, {1, 2}, ErrorModel(1.0));
  CHECK(s1[0] == 10.0);
  CHECK(s1[1] == 5.0);
  CHECK(sigma_counts(h, {1, 1}, ErrorModel(1.9))[0] == doctest::Approx(19.0).epsilon(1e-15));
  CHECK(kind_of([&] { sigma_counts(h, {1, 3}, ErrorModel()); }) == ErrorKind::ZeroCount);
  CHECK_THROWS_AS(ErrorModel(0.0), Error);
  CHECK_THROWS_AS(ErrorModel(-1.0), Error);
}

TEST_CASE("exact power law is recovered for any inflation") {
  auto h = power_law({5, 15}, kNorm, kSlope);
  for (double k : {0.1, 1.0, 1.9, 7.0}) {
    auto fit = fit_loglog(h, {5, 15}, 1, ErrorModel(k));
    CHECK(std::fabs(fit.intercept() - kNorm) < 1e-10);
    CHECK(std::fabs(fit.slope() - kSlope) < 1e-10);
    CHECK(fit.chi2 < 1e-16);
    CHECK(fit.dof == 9);
    CHECK(fit.fit_range == SizeRange{5, 15});
  }
}

TEST_CASE("constant data gives a flat line") {
  SizeHistogram h({{1, 100}, {2, 100}, {3, 7}, {4, 100}});
  std::vector<int> sizes = {1, 2, 4};
  auto fit = fit_sizes(h, sizes, 1, ErrorModel());
  CHECK(std::fabs(fit.slope()) < 1e-12);
  CHECK(fit.intercept() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.chi2 < 1e-20);
  CHECK(fit.fit_range == SizeRange{1, 4});
}

TEST_CASE("fit errors") {
  auto h = power_law({5, 25}, kNorm, kSlope);
  CHECK(kind_of([&] { fit_loglog(h, {5, 5}, 1, ErrorModel()); }) == ErrorKind::Underdetermined);
  CHECK(kind_of([&] { fit_loglog(h, {5, 6}, 1, ErrorModel()); }) == ErrorKind::Underdetermined);
  CHECK(kind_of([&] { fit_loglog(h, {5, 9}, 4, ErrorModel()); }) == ErrorKind::Underdetermined);
  CHECK(kind_of([&] { fit_loglog(h, {5, 15}, 5, ErrorModel()); }) == ErrorKind::Unsupported);
  CHECK(kind_of([&] { fit_loglog(h, {5, 15}, 0, ErrorModel()); }) == ErrorKind::Unsupported);
  CHECK(kind_of([&] { fit_loglog(h, {4, 15}, 1, ErrorModel()); }) == ErrorKind::Range);
  SizeHistogram z({{5, 10}, {6, 0}, {7, 8}, {8, 6}});
  CHECK(kind_of([&] { fit_loglog(z, {5, 8}, 1, ErrorModel()); }) == ErrorKind::ZeroCount);
  CHECK(kind_of([&] { fit_loglog(z, {7, 8}, 1, ErrorModel()); }) == ErrorKind::Underdetermined);
}

TEST_CASE("evaluate") {
  LogLogFit fit;
  fit.coefficients = {kNorm, kSlope};
  CHECK(evaluate(fit, 1) == doctest::Approx(std::pow(10.0, 5.838)).epsilon(1e-14));
  CHECK(evaluate(fit, 1) == doctest::Approx(688652.0).epsilon(1e-6));
  fit.coefficients = {0, -1};
  CHECK(evaluate(fit, 10) == doctest::Approx(0.1).epsilon(1e-15));
  fit.coefficients = {1, 0};
  CHECK(evaluate(fit, 7) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(fit, 0), Error);
}

TEST_CASE("polynomial data of degree 2..4 is recovered") {
  for (int d = 2; d <= 4; ++d) {
    std::vector<double> c = {4.0, -1.0, 0.3, -0.2, 0.05};
    c.resize(static_cast<std::size_t>(d + 1));
    std::vector<SizeBin> bins;
    for (int a = 5; a <= 14; ++a) bins.push_back({a, std::pow(10.0, evaluate_log(c, std::log10(a)))});
    auto fit = fit_loglog(SizeHistogram(bins), {5, 14}, d, ErrorModel());
    CAPTURE(d);
    for (int j = 0; j <= d; ++j) CHECK(fit.coefficients[static_cast<std::size_t>(j)] == doctest::Approx(c[static_cast<std::size_t>(j)]).epsilon(1e-6));
    CHECK(fit.chi2 < 1e-10);
  }
}

TEST_CASE("Poisson-noised replications recover the slope") {
  const int reps = 200;
  double sum = 0, sum2 = 0;
  for (int r = 0; r < reps; ++r) {
    auto h = noisy_power_law({5, 15}, kNorm, kSlope, 1000 + static_cast<std::uint64_t>(r));
    double s = fit_loglog(h, {5, 15}, 1, ErrorModel()).slope();
    sum += s;
    sum2 += s * s;
  }
  double mean = sum / reps;
  double sd = std::sqrt((sum2 - reps * mean * mean) / (reps - 1));
  CHECK(std::fabs(mean - kSlope) < 3.0 * sd / std::sqrt(reps));
}

TEST_CASE("covariance is symmetric positive semidefinite") {
  for (int d = 1; d <= 4; ++d) {
    auto h = noisy_power_law({5, 15}, kNorm, kSlope, 3);
    auto fit = fit_loglog(h, {5, 15}, d, ErrorModel());
    Eigen::Map<const Eigen::MatrixXd> cov(fit.covariance.data(), d + 1, d + 1);
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12 * cov.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  }
}

TEST_CASE("scale covariance: counts times m") {
  SplitMix64 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto h = noisy_power_law({5, 15}, kNorm, kSlope, 50 + static_cast<std::uint64_t>(t));
    double m = 0.1 + 20.0 * rng.uniform01();
    std::vector<double> scaled;
    for (const auto& b : h.bins()) scaled.push_back(b.count * m);
    auto hm = h.with_counts(scaled);
    for (int d = 1; d <= 3; ++d) {
      auto f = fit_loglog(h, {5, 15}, d, ErrorModel());
      auto g = fit_loglog(hm, {5, 15}, d, ErrorModel());
      CHECK(g.coefficients[0] == doctest::Approx(f.coefficients[0] + std::log10(m)).epsilon(1e-9));
      for (int j = 1; j <= d; ++j)
        CHECK(g.coefficients[static_cast<std::size_t>(j)] == doctest::Approx(f.coefficients[static_cast<std::size_t>(j)]).epsilon(1e-8));
      CHECK(g.chi2 == doctest::Approx(f.chi2 * m).epsilon(1e-8));
    }
  }
}

TEST_CASE("inflation divides chi2 by k squared exactly") {
  auto h = noisy_power_law({5, 15}, kNorm, kSlope, 9);
  auto f1 = fit_loglog(h, {5, 15}, 1, ErrorModel(1.0));
  auto f19 = fit_loglog(h, {5, 15}, 1, ErrorModel(1.9));
  CHECK(f19.chi2 == f1.chi2 / (1.9 * 1.9));
  CHECK(f19.chi2 == doctest::Approx(f1.chi2 / 3.61).epsilon(1e-15));
  CHECK(f19.coefficients == f1.coefficients);
  CHECK(f19.stderr_of(1) == doctest::Approx(1.9 * f1.stderr_of(1)).epsilon(1e-14));
}

TEST_CASE("WLS minimum matches brute-force grid search on small point sets") {
  SplitMix64 rng(5);
  for (int t = 0; t < 10; ++t) {
    int n = 3 + static_cast<int>(rng.below(4));  // 3..6 points
    std::vector<SizeBin> bins;
    for (int a = 5; a < 5 + n; ++a) bins.push_back({a, 1000.0 * std::pow(a, -1.5) * (1.0 + 0.1 * (rng.uniform01() - 0.5))});
    SizeHistogram h(bins);
    auto fit = fit_loglog(h, h.span(), 1, ErrorModel());

    std::vector<double> x, y, s;
    for (const auto& b : h.bins()) {
      x.push_back(std::log10(b.size));
      y.push_back(std::log10(b.count));
      s.push_back(1.0 / (std::sqrt(b.count) * std::log(10.0)));
    }
    double c0, c1;
    double best = grid_min_chi2(x, y, s, c0, c1);
    CHECK(std::fabs(best - fit.chi2) < 1e-5);
    CHECK(std::fabs(c0 - fit.intercept()) < 1e-6 * 100);
    CHECK(std::fabs(c1 - fit.slope()) < 1e-6 * 100);
  }
}

TEST_CASE("removing the top bin drops one dof and never raises chi2") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto h = noisy_power_law({5, 15}, kNorm, kSlope, seed);
    auto full = fit_loglog(h, {5, 15}, 1, ErrorModel());
    std::vector<int> drop = {15};
    auto cut = fit_excluding(h, {5, 15}, drop, 1, ErrorModel());
    CHECK(cut.dof == full.dof - 1);
    CHECK(cut.chi2 <= full.chi2 + 1e-12);
    CHECK(cut.fit_range == SizeRange{5, 14});
  }
}
