#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tilediff/rng.hpp"
#include "tilediff/schedule.hpp"

using namespace tilediff;

TEST_CASE("single-step schedule") {
    NoiseSchedule s = linear_schedule(1, 0.1, 0.1);
    CHECK(s.steps() == 1);
    CHECK(s.beta(1) == doctest::Approx(0.1));
    CHECK(s.alpha_bar(1) == doctest::Approx(0.9));
    CHECK(s.alpha_bar(0) == 1.0);
}

TEST_CASE("two-step schedule matches the product definition") {
    NoiseSchedule s = linear_schedule(2, 0.1, 0.3);
    CHECK(s.beta(1) == doctest::Approx(0.1));
    CHECK(s.beta(2) == doctest::Approx(0.3));
    CHECK(s.alpha_bar(1) == doctest::Approx(0.9));
    CHECK(s.alpha_bar(2) == doctest::Approx(0.63));
}

TEST_CASE("default full-scale schedule ends near zero signal") {
    NoiseSchedule s = linear_schedule(1000, 1e-4, 0.02);
    CHECK(s.alpha_bar(1000) < 5e-5);
    CHECK(s.alpha_bar(1000) > 0.0);
}

TEST_CASE("alpha_bar recurrence and monotonicity") {
    NoiseSchedule s = linear_schedule(100, 1e-4, 0.02);
    for (int t = 1; t <= 100; ++t) {
        CHECK(s.alpha_bar(t) ==
              doctest::Approx(s.alpha_bar(t - 1) * (1.0 - s.beta(t))).epsilon(1e-12));
        CHECK(s.alpha_bar(t) < s.alpha_bar(t - 1));
        CHECK(s.beta(t) >= s.beta(std::max(1, t - 1)));
    }
}

TEST_CASE("schedule argument validation") {
    CHECK_THROWS_AS(linear_schedule(0, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(linear_schedule(10, 0.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(linear_schedule(10, 0.3, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(linear_schedule(10, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("sigma variants") {
    NoiseSchedule s2 = linear_schedule(2, 0.1, 0.3);

    SUBCASE("beta variant is the square root of beta") {
        NoiseSchedule s = linear_schedule(1, 0.04, 0.04);
        CHECK(sigma(s, 1, SigmaVariant::kBeta) == doctest::Approx(0.2));
    }
    SUBCASE("tilde variant is zero at t=1") {
        CHECK(sigma(s2, 1, SigmaVariant::kTildeBeta) == 0.0);
    }
    SUBCASE("tilde variant at t=2 of the two-step schedule") {
        double expected = (1.0 - 0.9) / (1.0 - 0.63) * 0.3;
        CHECK(s2.sigma2(2, SigmaVariant::kTildeBeta) == doctest::Approx(expected));
        CHECK(s2.sigma2(2, SigmaVariant::kTildeBeta) == doctest::Approx(0.081081081081));
    }
    SUBCASE("tilde never exceeds beta") {
        NoiseSchedule s = linear_schedule(200, 1e-4, 0.05);
        for (int t = 1; t <= 200; ++t) {
            CHECK(s.sigma2(t, SigmaVariant::kTildeBeta) <= s.sigma2(t, SigmaVariant::kBeta));
        }
    }
    SUBCASE("t out of range") {
        CHECK_THROWS_AS(s2.sigma2(0, SigmaVariant::kBeta), std::out_of_range);
        CHECK_THROWS_AS(s2.sigma2(3, SigmaVariant::kBeta), std::out_of_range);
    }
}

TEST_CASE("forward_diffuse") {
    NoiseSchedule s = linear_schedule(2, 0.1, 0.3);

    SUBCASE("t=0 convention returns x0 unchanged") {
        Grid x0(2, 2, 1.5);
        Grid eps(2, 2, 123.0);
        Grid out = forward_diffuse(x0, 0, eps, s);
        CHECK(out.values == x0.values);
    }
    SUBCASE("direct formula") {
        // alpha_bar = 0.25 via beta = 0.75 single step
        NoiseSchedule s1 = linear_schedule(1, 0.75, 0.75);
        Grid x0(1, 1, 2.0);
        Grid eps(1, 1, 1.0);
        Grid out = forward_diffuse(x0, 1, eps, s1);
        CHECK(out.at(0, 0) == doctest::Approx(0.5 * 2.0 + std::sqrt(0.75)).epsilon(1e-12));
        CHECK(out.at(0, 0) == doctest::Approx(1.8660254).epsilon(1e-6));
    }
    SUBCASE("marginal variance matches 1 - alpha_bar") {
        const int n = 100000;
        const int t = 2;
        double ab = s.alpha_bar(t);
        Grid x0(1, 1, 0.7);
        RngStream stream(21, NoisePurpose::kAux);
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            Grid eps(1, 1, stream.normal());
            double v = forward_diffuse(x0, t, eps, s).at(0, 0);
            sum += v;
            sumsq += v * v;
        }
        double mean = sum / n;
        double var = sumsq / n - mean * mean;
        CHECK(var == doctest::Approx(1.0 - ab).epsilon(0.03));
    }
    SUBCASE("shape mismatch and t range") {
        Grid x0(2, 2, 0.0);
        Grid eps(2, 3, 0.0);
        CHECK_THROWS_AS(forward_diffuse(x0, 1, eps, s), std::invalid_argument);
        Grid eps2(2, 2, 0.0);
        CHECK_THROWS_AS(forward_diffuse(x0, 3, eps2, s), std::out_of_range);
    }
}
