#pragma once

#include <cstddef>
#include <span>

namespace walker {

double mean(std::span<const double> v);

/// Sample standard deviation (n - 1 denominator).
double sample_std(std::span<const double> v);

/// Product-moment correlation coefficient. Requires equal lengths >= 3 and
/// nonzero variance in both inputs.
double pearson(std::span<const double> x, std::span<const double> y);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  std::size_t n = 0;
};

/// Paired t-test on matched samples: t = mean(d) / (sd(d) / sqrt(n)) with
/// d = a - b, two-sided p from the Student-t distribution with n - 1 dof.
TTestResult paired_t(std::span<const double> a, std::span<const double> b);

/// Two-sided tail probability of the Student-t distribution.
double student_t_two_sided_p(double t, double dof);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation converged to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace walker
