#include "flowgraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "flowgraph/error.hpp"

namespace flowgraph {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return h;
}

struct Moments {
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
};

Moments moments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.ss += (x - m.mean) * (x - m.mean);
  return m;
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return std::clamp(incomplete_beta(df / 2.0, 0.5, df / (df + t * t)), 0.0, 1.0);
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

double median_speedup(std::span<const double> reference, std::span<const double> candidate) {
  if (reference.empty() || candidate.empty())
    throw Error(ErrorCode::EmptySample, "speedup needs nonempty reference and candidate samples");
  return median(reference) / median(candidate);
}

TTestResult two_sample_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::EmptySample, "t-test needs at least two values per sample");
  const Moments ma = moments(a), mb = moments(b);
  TTestResult r;
  r.df = a.size() + b.size() - 2;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double pooled = (ma.ss + mb.ss) / static_cast<double>(r.df);
  if (constant(a) && constant(b)) {
    if (a.front() == b.front()) throw Error(ErrorCode::DegenerateVariance, "both samples are constant and equal");
    r.t_statistic = a.front() > b.front() ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.t_statistic = (ma.mean - mb.mean) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.p_value = student_t_two_sided_p(r.t_statistic, static_cast<double>(r.df));
  }
  r.reject_null = r.p_value < alpha;
  return r;
}

}  // namespace flowgraph
