#pragma once

#include <cstddef>
#include <span>

namespace itts {

double mean(std::span<const double> xs);
// Population (n denominator) and sample (n-1 denominator) forms. Summary
// error bars use the population form, significance tests the sample form.
double population_variance(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double population_stddev(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

// Regularized incomplete beta I_x(a,b) via the continued-fraction expansion
// (modified Lentz), with the symmetry transform for fast convergence.
double ibeta_regularized(double a, double b, double x);

// Two-tailed p for Student's t:  p = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_tailed_p(double t, double df);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool degenerate = false;  // all-zero diffs, or sd == 0 with nonzero mean
};

// Paired two-tailed t-test on equal-length samples (pairs (x_i, y_i)).
TTestResult paired_ttest(std::span<const double> x, std::span<const double> y);

}  // namespace itts
