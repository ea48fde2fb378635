#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tilediff/errors.hpp"
#include "tilediff/experiments.hpp"
#include "tilediff/rng.hpp"
#include "tilediff/style.hpp"

using namespace tilediff;

TEST_CASE("slerp endpoints are exact") {
    RngStream stream(3, NoisePurpose::kAux);
    Grid p = gaussian_grid(4, 4, stream);
    Grid q = gaussian_grid(4, 4, stream);
    CHECK(slerp(p, q, 0.0).values == p.values);
    CHECK(slerp(p, q, 1.0).values == q.values);
}

TEST_CASE("slerp of orthogonal unit vectors at the midpoint") {
    Grid p(1, 2), q(1, 2);
    p.values = {1.0, 0.0};
    q.values = {0.0, 1.0};
    Grid mid = slerp(p, q, 0.5);
    double expected = std::sqrt(2.0) / 2.0;
    CHECK(mid.values[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mid.values[1] == doctest::Approx(expected).epsilon(1e-12));
    double norm = std::sqrt(mid.values[0] * mid.values[0] + mid.values[1] * mid.values[1]);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slerp rejects zero-norm and antipodal inputs") {
    Grid p(1, 2), q(1, 2);
    p.values = {1.0, 0.0};
    q.values = {0.0, 0.0};
    CHECK_THROWS_AS(slerp(p, q, 0.5), std::invalid_argument);
    q.values = {-1.0, 0.0};
    CHECK_THROWS_AS(slerp(p, q, 0.5), std::invalid_argument);
}

TEST_CASE("slerp falls back to lerp for nearly parallel inputs") {
    Grid p(1, 2), q(1, 2);
    p.values = {1.0, 0.0};
    q.values = {2.0, 1e-9};
    Grid out = slerp(p, q, 0.25);
    CHECK(out.values[0] == doctest::Approx(0.75 * 1.0 + 0.25 * 2.0).epsilon(1e-9));
}

TEST_CASE("slerp approximately preserves norms of high-dimensional gaussians") {
    // dimension 1024; the spec claims P(|ratio - 1| < 5%) >= 0.99
    const int trials = 1000;
    RngStream ref_stream(5, NoisePurpose::kStyleRef);
    Grid ref = gaussian_grid(32, 32, ref_stream);
    int within = 0;
    for (int i = 0; i < trials; ++i) {
        RngStream stream(100 + i, NoisePurpose::kAux);
        Grid p = gaussian_grid(32, 32, stream);
        Grid out = slerp(p, ref, 0.4);
        double np = 0.0, no = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            np += p.values[k] * p.values[k];
            no += out.values[k] * out.values[k];
        }
        double ratio = std::sqrt(no / np);
        if (std::abs(ratio - 1.0) < 0.05) ++within;
    }
    CHECK(within >= static_cast<int>(0.99 * trials));
}

TEST_CASE("apply_style_alignment endpoints") {
    RngStream canvas_stream(7, NoisePurpose::kCanvasInit);
    Grid canvas = gaussian_grid(8, 24, canvas_stream);
    RngStream ref_stream(8, NoisePurpose::kStyleRef);
    Grid ref = gaussian_grid(8, 8, ref_stream);

    SUBCASE("alpha 0 is bit-identical") {
        Grid out = apply_style_alignment(canvas, StyleAlignConfig{0.0, ref});
        CHECK(out.values == canvas.values);
    }
    SUBCASE("alpha 1 tiles the reference exactly") {
        Grid out = apply_style_alignment(canvas, StyleAlignConfig{1.0, ref});
        for (int tile = 0; tile < 3; ++tile) {
            Grid cropped = crop(out, Region{0, tile * 8, 8, 8});
            CHECK(cropped.values == ref.values);
        }
    }
    SUBCASE("divisibility is enforced") {
        Grid bad = gaussian_grid(8, 20, canvas_stream);
        CHECK_THROWS_AS(apply_style_alignment(bad, StyleAlignConfig{0.5, ref}), ConfigError);
    }
    SUBCASE("alpha outside [0,1] rejected") {
        CHECK_THROWS_AS(apply_style_alignment(canvas, StyleAlignConfig{1.5, ref}), ConfigError);
        CHECK_THROWS_AS(apply_style_alignment(canvas, StyleAlignConfig{-0.1, ref}), ConfigError);
    }
}

TEST_CASE("alignment at alpha 0.4 tightens pairwise similarity on every trial") {
    RngStream ref_stream(11, NoisePurpose::kStyleRef);
    Grid ref = gaussian_grid(8, 8, ref_stream);
    for (int trial = 0; trial < 100; ++trial) {
        RngStream stream(200 + trial, NoisePurpose::kCanvasInit);
        Grid canvas = gaussian_grid(8, 56, stream);  // seven crops
        double before = mean_pairwise_cosine(canvas, 8, 8);
        Grid aligned = apply_style_alignment(canvas, StyleAlignConfig{0.4, ref});
        double after = mean_pairwise_cosine(aligned, 8, 8);
        CHECK(after > before);
    }
}

TEST_CASE("mean pairwise angle is non-increasing across the alpha grid") {
    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(i / 10.0);
    StyleSweepResult sweep = style_sweep_experiment(8, 56, 8, 8, alphas, 100, 900, 901);
    for (std::size_t i = 0; i + 1 < sweep.alphas.size(); ++i) {
        CHECK(sweep.mean_angle[i + 1] <= sweep.mean_angle[i] + 1e-12);
    }
    // endpoints: independent gaussians start near orthogonal, end identical
    CHECK(sweep.mean_angle.front() > 1.3);
    CHECK(sweep.mean_angle.back() == doctest::Approx(0.0).epsilon(1e-9));
}
