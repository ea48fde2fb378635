#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tilediff/rng.hpp"

using namespace tilediff;

TEST_CASE("same seed and key reproduce the grid bit for bit") {
    RngStream a(42, NoisePurpose::kStepNoise, 3, 17);
    RngStream b(42, NoisePurpose::kStepNoise, 3, 17);
    Grid ga = gaussian_grid(8, 8, a);
    Grid gb = gaussian_grid(8, 8, b);
    CHECK(ga.values == gb.values);
}

TEST_CASE("distinct key fields change the stream") {
    Grid base = gaussian_grid(4, 4, RngStream(42, NoisePurpose::kStepNoise, 0, 0));
    CHECK(gaussian_grid(4, 4, RngStream(43, NoisePurpose::kStepNoise, 0, 0)).values !=
          base.values);
    CHECK(gaussian_grid(4, 4, RngStream(42, NoisePurpose::kCanvasInit, 0, 0)).values !=
          base.values);
    CHECK(gaussian_grid(4, 4, RngStream(42, NoisePurpose::kStepNoise, 1, 0)).values !=
          base.values);
    CHECK(gaussian_grid(4, 4, RngStream(42, NoisePurpose::kStepNoise, 0, 1)).values !=
          base.values);
}

TEST_CASE("standard normal moments at 1e5 samples") {
    const int n = 100000;
    RngStream stream(7, NoisePurpose::kAux);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = stream.normal();
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("different patch-index substreams are uncorrelated") {
    const int n = 100000;
    RngStream a(9, NoisePurpose::kStepNoise, 0, 5);
    RngStream b(9, NoisePurpose::kStepNoise, 1, 5);
    double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = a.normal();
        double y = b.normal();
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    double cov = sab / n - (sa / n) * (sb / n);
    double rho = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) *
                                 (sbb / n - (sb / n) * (sb / n)));
    CHECK(std::abs(rho) < 0.02);
}

TEST_CASE("uniform draws stay in [0,1)") {
    RngStream stream(3, NoisePurpose::kAux);
    for (int i = 0; i < 10000; ++i) {
        double u = stream.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gaussian_grid rejects zero dimensions") {
    RngStream stream(1, NoisePurpose::kAux);
    CHECK_THROWS_AS(gaussian_grid(0, 4, stream), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_grid(4, 0, stream), std::invalid_argument);
}
