#include <cmath>
#include <random>
#include <vector>

#include "flowgraph/stats.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;
using Catch::Approx;

TEST_CASE("median_speedup", "[stats]") {
  CHECK(median_speedup(std::vector<double>{2, 2, 2}, std::vector<double>{1, 1, 1}) == 2.0);
  CHECK(median_speedup(std::vector<double>{3, 1, 2}, std::vector<double>{1, 2, 3}) == 1.0);
  CHECK(median_speedup(std::vector<double>{1, 2, 100}, std::vector<double>{1, 2, 3}) == 1.0);
  CHECK(median(std::vector<double>{4, 1, 3, 2}) == 2.5);
  REQUIRE_THROWS_CODE(median_speedup(std::vector<double>{}, std::vector<double>{1}), ErrorCode::EmptySample);
  REQUIRE_THROWS_CODE(median_speedup(std::vector<double>{1}, std::vector<double>{}), ErrorCode::EmptySample);
}

TEST_CASE("t-test examples", "[stats]") {
  const std::vector<double> same{1, 2, 3};
  const auto r0 = two_sample_t_test(same, same);
  CHECK(r0.t_statistic == 0.0);
  CHECK(r0.p_value == 1.0);
  CHECK_FALSE(r0.reject_null);

  const auto r = two_sample_t_test(std::vector<double>{2, 4, 6}, std::vector<double>{1, 2, 3});
  CHECK(r.df == 4);
  // Frozen from scipy.stats.ttest_ind (pooled variance).
  CHECK(r.t_statistic == Approx(oracle::pooled_t({2, 4, 6}, {1, 2, 3})).epsilon(1e-12));
  CHECK(r.t_statistic == Approx(1.5491933384829668).epsilon(1e-12));
  CHECK(r.p_value == Approx(0.19626117814926947).epsilon(1e-9));
  CHECK_FALSE(r.reject_null);

  std::vector<double> a, b;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (int i = 0; i < 10; ++i) {
    b.push_back(5.0 + noise(rng));
    a.push_back(b.back() + 1000.0 + noise(rng));
  }
  const auto sep = two_sample_t_test(a, b);
  CHECK(sep.p_value < 1e-3);
  CHECK(sep.reject_null);
}

TEST_CASE("t-test errors", "[stats]") {
  REQUIRE_THROWS_CODE(two_sample_t_test(std::vector<double>{1}, std::vector<double>{1, 2}), ErrorCode::EmptySample);
  REQUIRE_THROWS_CODE(two_sample_t_test(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2}),
                      ErrorCode::DegenerateVariance);
  const auto apart = two_sample_t_test(std::vector<double>{3, 3}, std::vector<double>{2, 2});
  CHECK(std::isinf(apart.t_statistic));
  CHECK(apart.p_value == 0.0);
}

TEST_CASE("t-test matches independent oracles on random samples", "[stats][property]") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(2, 12);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a(static_cast<std::size_t>(size(rng))), b(static_cast<std::size_t>(size(rng)));
    for (auto& x : a) x = value(rng);
    const double shift = value(rng);
    for (auto& x : b) x = value(rng) + shift;
    const auto r = two_sample_t_test(a, b, 0.05);
    const double t = oracle::pooled_t(a, b);
    const double p = oracle::t_two_sided_p(t, static_cast<double>(a.size() + b.size() - 2));
    CHECK(std::abs(r.t_statistic - t) <= 1e-10 * std::max(1.0, std::abs(t)));
    CHECK(std::abs(r.p_value - p) <= 1e-8);
    CHECK(r.reject_null == (r.p_value < 0.05));
  }
}

TEST_CASE("t-test symmetry, scale invariance and monotone p", "[stats][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> a(6), b(8);
    for (auto& x : a) x = value(rng);
    for (auto& x : b) x = value(rng) + 1.0;
    const auto ab = two_sample_t_test(a, b);
    const auto ba = two_sample_t_test(b, a);
    CHECK(ab.t_statistic == Approx(-ba.t_statistic).epsilon(1e-12));
    CHECK(ab.p_value == Approx(ba.p_value).epsilon(1e-12));
    auto sa = a, sb = b;
    for (auto& x : sa) x *= 37.5;
    for (auto& x : sb) x *= 37.5;
    const auto scaled = two_sample_t_test(sa, sb);
    CHECK(scaled.t_statistic == Approx(ab.t_statistic).epsilon(1e-10));
    CHECK(scaled.p_value == Approx(ab.p_value).epsilon(1e-9));
  }
  double last = 1.0;
  for (double t = 0.0; t <= 20.0; t += 0.25) {
    const double p = student_t_two_sided_p(t, 7.0);
    CHECK(p <= last);
    last = p;
  }
  CHECK(student_t_two_sided_p(0.0, 3.0) == 1.0);
}

TEST_CASE("incomplete beta edge values", "[stats]") {
  CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(1, 1) = x and I_x(a, 1) = x^a.
  CHECK(incomplete_beta(1.0, 1.0, 0.3) == Approx(0.3).epsilon(1e-14));
  CHECK(incomplete_beta(2.5, 1.0, 0.6) == Approx(std::pow(0.6, 2.5)).epsilon(1e-13));
}
