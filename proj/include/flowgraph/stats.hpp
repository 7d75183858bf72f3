#pragma once

#include <cstddef>
#include <span>

namespace flowgraph {

struct TTestResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t df = 0;
  bool reject_null = false;
};

double median(std::span<const double> values);

/// median(reference) / median(candidate). Throws EmptySample.
double median_speedup(std::span<const double> reference, std::span<const double> candidate);

/// Two-sided pooled-variance Student t-test of equal means, df = |a|+|b|-2.
///
/// Throws EmptySample when a sample has fewer than two values and
/// DegenerateVariance when both samples are constant and equal (callers
/// report t = 0, p = 1 in that case). Constant samples with different means
/// give t = ±inf and p = 0.
TTestResult two_sample_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `df` degrees
/// of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace flowgraph
