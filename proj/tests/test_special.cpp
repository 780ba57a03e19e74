#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>

#include "firmbreak/error.hpp"
#include "firmbreak/special.hpp"
#include "quadrature_oracle.hpp"

using namespace firmbreak;

TEST_CASE("chi2 p-value at 26.9 with 19 dof") {
  double p = chi2_pvalue(26.9, 19);
  // scipy.stats.chi2.sf(26.9, 19)
  CHECK(p == doctest::Approx(0.1070039883139922).epsilon(1e-10));
  CHECK(p >= 0.103);
  CHECK(p <= 0.113);
  CHECK(std::fabs(p - oracle::chi2_upper_tail_quadrature(26.9, 19)) < 1e-8);
}

TEST_CASE("chi2 p-value edge cases") {
  CHECK(chi2_pvalue(0.0, 1) == 1.0);
  CHECK(chi2_pvalue(0.0, 40) == 1.0);
  CHECK_THROWS_AS(chi2_pvalue(std::numeric_limits<double>::quiet_NaN(), 3), Error);
  CHECK_THROWS_AS(chi2_pvalue(std::numeric_limits<double>::infinity(), 3), Error);
  CHECK_THROWS_AS(chi2_pvalue(-1.0, 3), Error);
  CHECK_THROWS_AS(chi2_pvalue(1.0, 0), Error);
  // dof 2: Q = exp(-x/2)
  CHECK(chi2_pvalue(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
}

TEST_CASE("p-value agrees with quadrature on both branches") {
  for (int dof : {1, 2, 5, 11, 19, 40}) {
    for (double chi2 : {0.5, 3.0, 10.0, 26.9, 60.0}) {
      CAPTURE(dof);
      CAPTURE(chi2);
      CHECK(std::fabs(chi2_pvalue(chi2, dof) - oracle::chi2_upper_tail_quadrature(chi2, dof)) < 1e-8);
    }
  }
}

TEST_CASE("p-value decreases in chi2 and tends to one half at chi2 = dof") {
  for (int dof : {1, 4, 19}) {
    double prev = 1.0;
    for (double x = 0.25; x < 80.0; x += 0.25) {
      double p = chi2_pvalue(x, dof);
      CHECK(p < prev);
      prev = p;
    }
  }
  // Q(k/2, k/2) approaches 1/2 from below like 0.19/sqrt(k); the gap is under
  // 0.02 only from k = 89 on. Reference values from scipy.stats.chi2.sf.
  CHECK(chi2_pvalue(30, 30) == doctest::Approx(0.4656537089440098).epsilon(1e-10));
  CHECK(chi2_pvalue(90, 90) == doctest::Approx(0.4801740731591999).epsilon(1e-10));
  double prev_gap = 1.0;
  for (int dof = 30; dof <= 2000; dof += 97) {
    double gap = 0.5 - chi2_pvalue(dof, dof);
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    if (dof >= 90) CHECK(gap < 0.02);
    prev_gap = gap;
  }
}

TEST_CASE("P + Q = 1") {
  for (double a : {0.5, 1.0, 3.5, 20.0})
    for (double x : {0.1, 1.0, 4.0, 30.0})
      CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
}
