#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "tilediff/denoiser.hpp"
#include "tilediff/rng.hpp"
#include "tilediff/schedule.hpp"

using namespace tilediff;

namespace {

// alpha_bar(1) = 1 - beta for a one-step schedule
NoiseSchedule schedule_with_alpha_bar(double alpha_bar) {
    return linear_schedule(1, 1.0 - alpha_bar, 1.0 - alpha_bar);
}

}  // namespace

TEST_CASE("gmm: standard-normal prior collapses to the linear shrinkage rule") {
    GmmPrior prior({{1.0, 0.0, 1.0}});
    NoiseSchedule s = schedule_with_alpha_bar(0.4);
    RngStream stream(2, NoisePurpose::kAux);
    Grid x = gaussian_grid(4, 4, stream);
    Grid eps = gmm_eps_predict(x, 1, prior, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(eps.values[i] == doctest::Approx(std::sqrt(1.0 - 0.4) * x.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("gmm: noiseless mode center predicts zero noise") {
    // second component 20+ stds away
    GmmPrior prior({{0.5, 0.0, 0.5}, {0.5, 30.0, 0.5}});
    NoiseSchedule s = schedule_with_alpha_bar(0.64);
    Grid x(1, 1, std::sqrt(0.64) * 0.0);
    Grid eps = gmm_eps_predict(x, 1, prior, s);
    CHECK(std::abs(eps.at(0, 0)) < 1e-6);

    Grid x2(1, 1, std::sqrt(0.64) * 30.0);
    Grid eps2 = gmm_eps_predict(x2, 1, prior, s);
    CHECK(std::abs(eps2.at(0, 0)) < 1e-6);
}

TEST_CASE("gmm: symmetric two-component prior at the midpoint") {
    GmmPrior prior({{0.5, -2.0, 0.5}, {0.5, 2.0, 0.5}});
    NoiseSchedule s = schedule_with_alpha_bar(0.5);
    Grid x(1, 1, 0.0);
    Grid eps = gmm_eps_predict(x, 1, prior, s);
    CHECK(eps.at(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gmm: tweedie consistency for a single component") {
    GmmPrior prior({{1.0, 0.7, 1.3}});
    NoiseSchedule s = schedule_with_alpha_bar(0.37);
    double ab = 0.37;
    RngStream stream(8, NoisePurpose::kAux);
    for (int i = 0; i < 100; ++i) {
        double x = 3.0 * stream.normal();
        Grid xg(1, 1, x);
        double eps = gmm_eps_predict(xg, 1, prior, s).at(0, 0);
        double x0_from_eps = (x - std::sqrt(1.0 - ab) * eps) / std::sqrt(ab);
        // stated posterior mean
        double prec = ab / (1.0 - ab) + 1.0 / (1.3 * 1.3);
        double mean = (std::sqrt(ab) / (1.0 - ab) * x + 0.7 / (1.3 * 1.3)) / prec;
        CHECK(x0_from_eps == doctest::Approx(mean).epsilon(1e-10));
    }
}

TEST_CASE("gmm: log-space responsibilities survive tiny 1-alpha_bar") {
    GmmPrior prior({{0.5, -2.0, 0.5}, {0.5, 2.0, 0.5}});
    NoiseSchedule s = schedule_with_alpha_bar(1.0 - 1e-12);
    Grid x(1, 1, 2.0);
    Grid eps = gmm_eps_predict(x, 1, prior, s);
    CHECK(std::isfinite(eps.at(0, 0)));
}

TEST_CASE("gmm: rejects t=0-like configurations") {
    GmmPrior prior({{1.0, 0.0, 1.0}});
    NoiseSchedule s = linear_schedule(2, 0.1, 0.3);
    Grid x(1, 1, 0.0);
    CHECK_THROWS_AS(gmm_eps_predict(x, 0, prior, s), std::invalid_argument);
    CHECK_THROWS_AS(gmm_eps_predict(x, 3, prior, s), std::invalid_argument);
}

TEST_CASE("gmm prior validation") {
    CHECK_THROWS_AS(GmmPrior({}), std::invalid_argument);
    CHECK_THROWS_AS(GmmPrior({{0.0, 0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(GmmPrior({{1.0, 0.0, 0.0}}), std::invalid_argument);
    // unnormalized weights get normalized
    GmmPrior p({{2.0, 0.0, 1.0}, {2.0, 1.0, 1.0}});
    CHECK(p.components()[0].weight == doctest::Approx(0.5));
}

TEST_CASE("gp: identity covariance reduces to the standard-normal rule") {
    GpPrior prior = GpPrior::from_covariance(2, 2, Eigen::MatrixXd::Identity(4, 4));
    NoiseSchedule s = schedule_with_alpha_bar(0.4);
    RngStream stream(4, NoisePurpose::kAux);
    Grid x = gaussian_grid(2, 2, stream);
    Grid eps = gp_eps_predict(x, 1, prior, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(eps.values[i] == doctest::Approx(std::sqrt(0.6) * x.values[i]).epsilon(1e-10));
    }
}

TEST_CASE("gp: dead prior directions pass x_t through scaled") {
    // rank-1 covariance: only the constant direction is alive
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4) / 2.0;
    Eigen::MatrixXd cov = ones * ones.transpose() * 4.0;
    GpPrior prior = GpPrior::from_covariance(2, 2, cov);
    double ab = 0.5;
    NoiseSchedule s = schedule_with_alpha_bar(ab);

    // x orthogonal to the constant direction -> posterior mean 0
    Grid x(2, 2);
    x.values = {1.0, -1.0, 1.0, -1.0};
    Grid eps = gp_eps_predict(x, 1, prior, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(eps.values[i] ==
              doctest::Approx(x.values[i] / std::sqrt(1.0 - ab)).epsilon(1e-10));
    }
}

TEST_CASE("gp: posterior mean matches the dense-solve oracle on a random 8x8 covariance") {
    // random SPD covariance over an eight-cell patch
    RngStream stream(13, NoisePurpose::kAux);
    Eigen::MatrixXd a(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) a(i, j) = stream.normal();
    Eigen::MatrixXd cov = a * a.transpose() + Eigen::MatrixXd::Identity(8, 8) * 0.1;
    GpPrior prior = GpPrior::from_covariance(2, 4, cov);

    double ab = 0.3;
    NoiseSchedule s = schedule_with_alpha_bar(ab);
    Grid x = gaussian_grid(2, 4, stream);

    // brute force: x0 = sqrt(ab) C (ab C + (1-ab) I)^{-1} x
    Eigen::Map<const Eigen::VectorXd> xv(x.values.data(), 8);
    Eigen::MatrixXd m = ab * cov + (1.0 - ab) * Eigen::MatrixXd::Identity(8, 8);
    Eigen::VectorXd expected = std::sqrt(ab) * cov * m.ldlt().solve(xv).eval();

    Grid x0 = prior.posterior_x0(x, ab);
    for (int i = 0; i < 8; ++i) {
        CHECK(x0.values[i] == doctest::Approx(expected(i)).epsilon(1e-8));
    }
}

TEST_CASE("gp: separable squared-exponential equals the dense path") {
    GpPrior sep = GpPrior::squared_exponential(4, 6, 2.0);
    GpPrior dense = GpPrior::from_covariance(4, 6, sep.dense_covariance());
    RngStream stream(17, NoisePurpose::kAux);
    Grid x = gaussian_grid(4, 6, stream);
    Grid a = sep.posterior_x0(x, 0.42);
    Grid b = dense.posterior_x0(x, 0.42);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("gp: eigendecomposition invariants") {
    GpPrior prior = GpPrior::squared_exponential(3, 3, 1.5);
    Eigen::MatrixXd cov = prior.dense_covariance();

    // unit marginal variance on the diagonal
    for (int i = 0; i < 9; ++i) CHECK(cov(i, i) == doctest::Approx(1.0).epsilon(1e-12));

    GpPrior dense = GpPrior::from_covariance(3, 3, cov);
    const Eigen::MatrixXd& u = dense.dense_basis();
    Eigen::MatrixXd gram = u.transpose() * u;
    CHECK((gram - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);

    Eigen::MatrixXd rebuilt = u * dense.eigenvalues().asDiagonal() * u.transpose();
    CHECK((rebuilt - cov).norm() / cov.norm() < 1e-6);

    for (double l : dense.eigenvalues()) CHECK(l >= 0.0);
}

TEST_CASE("gp: predictor is linear") {
    GpPrior prior = GpPrior::squared_exponential(4, 4, 2.0);
    NoiseSchedule s = schedule_with_alpha_bar(0.55);
    RngStream stream(23, NoisePurpose::kAux);
    Grid x = gaussian_grid(4, 4, stream);
    Grid y = gaussian_grid(4, 4, stream);
    double a = 1.7, b = -0.4;

    Grid combo(4, 4);
    for (std::size_t i = 0; i < combo.size(); ++i) {
        combo.values[i] = a * x.values[i] + b * y.values[i];
    }
    Grid lhs = gp_eps_predict(combo, 1, prior, s);
    Grid ex = gp_eps_predict(x, 1, prior, s);
    Grid ey = gp_eps_predict(y, 1, prior, s);
    for (std::size_t i = 0; i < combo.size(); ++i) {
        CHECK(lhs.values[i] ==
              doctest::Approx(a * ex.values[i] + b * ey.values[i]).epsilon(1e-8));
    }
}

TEST_CASE("gp: shape mismatch rejected") {
    GpPrior prior = GpPrior::squared_exponential(4, 4, 2.0);
    NoiseSchedule s = schedule_with_alpha_bar(0.5);
    Grid x(4, 5, 0.0);
    CHECK_THROWS_AS(gp_eps_predict(x, 1, prior, s), std::invalid_argument);
}

TEST_CASE("zero denoiser") {
    Grid x(1, 1, 42.0);
    Grid eps = zero_eps(x, 5);
    CHECK(eps.height == 1);
    CHECK(eps.width == 1);
    CHECK(eps.at(0, 0) == 0.0);

    Grid x2(3, 7, -1.0);
    CHECK(zero_eps(x2, 1).size() == 21);
}
