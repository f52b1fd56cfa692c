#include <doctest.h>

#include <cmath>
#include <vector>

#include "itts/error.hpp"
#include "itts/stats.hpp"

using namespace itts;

TEST_CASE("mean and variance forms") {
    const std::vector<double> xs = {0.2, 0.4};
    CHECK(mean(xs) == doctest::Approx(0.3));
    CHECK(population_stddev(xs) == doctest::Approx(0.1));
    CHECK(sample_variance(xs) == doctest::Approx(0.02));
    CHECK_THROWS_AS(mean(std::vector<double>{}), EmptyData);
}

TEST_CASE("regularized incomplete beta reference values") {
    // closed forms: I_x(1,1) = x; I_x(2,2) = x^2 (3 - 2x)
    CHECK(ibeta_regularized(1.0, 1.0, 0.8) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ibeta_regularized(2.0, 2.0, 0.8) == doctest::Approx(0.896).epsilon(1e-12));
    CHECK(ibeta_regularized(3.0, 2.0, 0.001) == doctest::Approx(3.997e-9).epsilon(1e-9));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.05, 0.3, 0.62, 0.97})
        CHECK(ibeta_regularized(2.5, 7.0, x) ==
              doctest::Approx(1.0 - ibeta_regularized(7.0, 2.5, 1.0 - x)).epsilon(1e-12));
    CHECK(ibeta_regularized(0.5, 0.5, 0.0) == 0.0);
    CHECK(ibeta_regularized(0.5, 0.5, 1.0) == 1.0);
}

TEST_CASE("two-tailed p matches the t-distribution at published critical values") {
    // two-tailed 5% critical values for df = 4, 17, 999
    CHECK(std::fabs(student_t_two_tailed_p(2.776445, 4.0) - 0.05) < 1e-4);
    CHECK(std::fabs(student_t_two_tailed_p(2.109816, 17.0) - 0.05) < 1e-4);
    CHECK(std::fabs(student_t_two_tailed_p(1.962341, 999.0) - 0.05) < 1e-4);
    CHECK(student_t_two_tailed_p(0.0, 7.0) == 1.0);
}

TEST_CASE("paired t-test on the worked example diffs 1..5") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> y(5, 0.0);
    const TTestResult res = paired_ttest(x, y);
    CHECK(res.t == doctest::Approx(4.242640687119285).epsilon(1e-12));
    CHECK(res.df == 4.0);
    CHECK(res.p == doctest::Approx(0.013235599563682).epsilon(1e-9));
    CHECK(res.p >= 0.0130);
    CHECK(res.p <= 0.0135);
    CHECK_FALSE(res.degenerate);
}

TEST_CASE("paired t-test degenerate and symmetric cases") {
    const std::vector<double> same = {3.0, 1.0, 4.0};
    const TTestResult identical = paired_ttest(same, same);
    CHECK(identical.t == 0.0);
    CHECK(identical.p == 1.0);
    CHECK(identical.degenerate);

    // zero-mean nonconstant diffs: a regular t = 0
    const std::vector<double> x = {1.0, -1.0};
    const std::vector<double> y = {0.0, 0.0};
    const TTestResult zero_mean = paired_ttest(x, y);
    CHECK(zero_mean.t == 0.0);
    CHECK(zero_mean.p == 1.0);
    CHECK_FALSE(zero_mean.degenerate);

    // constant nonzero diffs: sd = 0
    const std::vector<double> shifted = {1.01, 2.01, 3.01};
    const std::vector<double> base = {1.0, 2.0, 3.0};
    const TTestResult constant = paired_ttest(shifted, base);
    CHECK(constant.p == 0.0);
    CHECK(constant.degenerate);
    CHECK(std::isinf(constant.t));

    CHECK_THROWS_AS(paired_ttest(std::vector<double>{1.0}, std::vector<double>{2.0}), EmptyData);
    CHECK_THROWS_AS(paired_ttest(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}),
                    ShapeError);
}
