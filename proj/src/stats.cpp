#include "itts/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "itts/error.hpp"

namespace itts {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw EmptyData("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

namespace {

double sum_sq_dev(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) {
        const double d = x - m;
        s += d * d;
    }
    return s;
}

// Continued fraction for I_x(a,b), Lentz's method.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double population_variance(std::span<const double> xs) {
    return sum_sq_dev(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw EmptyData("sample variance needs at least 2 values");
    return sum_sq_dev(xs) / static_cast<double>(xs.size() - 1);
}

double population_stddev(std::span<const double> xs) { return std::sqrt(population_variance(xs)); }

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double ibeta_regularized(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DataError("ibeta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
    if (df <= 0.0) throw DataError("t-test requires df > 0");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return ibeta_regularized(df / 2.0, 0.5, x);
}

TTestResult paired_ttest(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("paired samples", "unequal lengths");
    const std::size_t m = x.size();
    if (m < 2) throw EmptyData("paired t-test needs at least 2 pairs");

    std::vector<double> diffs(m);
    bool all_zero = true;
    for (std::size_t i = 0; i < m; ++i) {
        diffs[i] = x[i] - y[i];
        if (diffs[i] != 0.0) all_zero = false;
    }

    TTestResult res;
    res.df = static_cast<double>(m - 1);
    if (all_zero) {
        res.t = 0.0;
        res.p = 1.0;
        res.degenerate = true;
        return res;
    }

    const double d_mean = mean(diffs);
    const double d_sd = sample_stddev(diffs);
    if (d_sd == 0.0) {
        // Identical nonzero diffs: infinitely significant under the model.
        res.t = d_mean > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
        res.p = 0.0;
        res.degenerate = true;
        return res;
    }
    res.t = d_mean / (d_sd / std::sqrt(static_cast<double>(m)));
    res.p = student_t_two_tailed_p(res.t, res.df);
    return res;
}

}  // namespace itts
