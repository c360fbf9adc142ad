#include <cmath>
#include <vector>

#include "dialshape/stats.hpp"
#include "doctest.h"

using namespace dialshape;

TEST_CASE("mean, stddev, and standard error basics") {
  const std::vector<double> xs = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(mean(xs) == doctest::Approx(5.0));
  // Sample variance with n-1: sum of squared deviations is 32, 32/7.
  CHECK(sample_stddev(xs) == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(standard_error(xs) ==
        doctest::Approx(std::sqrt(32.0 / 7.0) / std::sqrt(8.0)));
}

TEST_CASE("paired t-test against hand-computed student-t values") {
  // Differences {1,2,3}: mean 2, sd 1, t = 2*sqrt(3), df 2.
  // For df=2 the CDF is 1/2 + t / (2*sqrt(2+t^2)), so
  // p = 1/2 - 2*sqrt(3) / (2*sqrt(14)) = 0.037086...
  const std::vector<double> a = {2.0, 4.0, 6.0};
  const std::vector<double> b = {1.0, 2.0, 3.0};
  const double t = 2.0 * std::sqrt(3.0);
  const double expected = 0.5 - t / (2.0 * std::sqrt(2.0 + t * t));
  CHECK(paired_t_pvalue_greater(a, b) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(paired_t_pvalue_greater(a, b) == doctest::Approx(0.0371).epsilon(1e-2));

  // Zero mean difference: t = 0, p exactly one half.
  const std::vector<double> c = {1.0, 3.0};
  const std::vector<double> d = {3.0, 1.0};
  CHECK(paired_t_pvalue_greater(c, d) == doctest::Approx(0.5));

  // Reversed direction: p above one half.
  CHECK(paired_t_pvalue_greater(b, a) == doctest::Approx(1.0 - expected).epsilon(1e-10));
}

TEST_CASE("degenerate paired t-test cases") {
  // Identical constant differences: sd 0, sign decides.
  CHECK(paired_t_pvalue_greater({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}) == 0.0);
  CHECK(paired_t_pvalue_greater({1.0, 1.0}, {1.0, 1.0}) == 1.0);
  CHECK_THROWS(paired_t_pvalue_greater({1.0}, {2.0}));
  CHECK_THROWS(paired_t_pvalue_greater({1.0, 2.0}, {1.0}));
}

TEST_CASE("moving average is trailing with a warmup prefix") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(moving_average(xs, 1) == xs);

  const auto w3 = moving_average(xs, 3);
  REQUIRE(w3.size() == 5);
  CHECK(w3[0] == doctest::Approx(1.0));
  CHECK(w3[1] == doctest::Approx(1.5));
  CHECK(w3[2] == doctest::Approx(2.0));
  CHECK(w3[3] == doctest::Approx(3.0));
  CHECK(w3[4] == doctest::Approx(4.0));

  // Constant input is a fixed point for any window.
  const std::vector<double> flat(10, 7.5);
  CHECK(moving_average(flat, 100) == flat);
}
