#include "tilediff/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tilediff {

Grid ZeroDenoiser::predict_eps(const Grid& x_t, int /*t*/, const NoiseSchedule&) const {
    return Grid::zeros(x_t.height, x_t.width);
}

Grid zero_eps(const Grid& x_t, int /*t*/) { return Grid::zeros(x_t.height, x_t.width); }

GmmPrior::GmmPrior(std::vector<GmmComponent> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("GmmPrior: needs at least one component");
    }
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("GmmPrior: weights must be positive");
        if (!(c.stddev > 0.0)) throw std::invalid_argument("GmmPrior: stddevs must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        for (auto& c : components_) c.weight /= total;
    }
}

double GmmPrior::posterior_x0(double x_t, double alpha_bar) const {
    const double ab = alpha_bar;
    const double rem = 1.0 - ab;
    const double sab = std::sqrt(ab);

    // Responsibilities in log space; likelihoods get extremely peaked as
    // rem -> 0, so max-subtraction is required before exponentiating.
    const std::size_t k = components_.size();
    double max_log = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> logliks;
    logliks.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& c = components_[i];
        double var = ab * c.stddev * c.stddev + rem;  // marginal of x_t under component i
        double d = x_t - sab * c.mean;
        logliks[i] = std::log(c.weight) - 0.5 * std::log(2.0 * std::numbers::pi * var) -
                     0.5 * d * d / var;
        max_log = std::max(max_log, logliks[i]);
    }
    double norm = 0.0;
    double x0 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& c = components_[i];
        double gamma = std::exp(logliks[i] - max_log);
        // Conjugate posterior mean given component i.
        double prec_prior = 1.0 / (c.stddev * c.stddev);
        double prec_like = ab / rem;
        double mean_i = (sab / rem * x_t + c.mean * prec_prior) / (prec_like + prec_prior);
        norm += gamma;
        x0 += gamma * mean_i;
    }
    return x0 / norm;
}

Grid eps_from_x0(const Grid& x_t, const Grid& x0_hat, double alpha_bar) {
    require_same_shape(x_t, x0_hat, "eps_from_x0");
    if (!(alpha_bar < 1.0)) {
        throw std::invalid_argument(
            "eps_from_x0: alpha_bar must be < 1 (at t = 0 there is no noise to predict; "
            "use the t = 0 convention and skip the denoiser)");
    }
    double sab = std::sqrt(alpha_bar);
    double inv = 1.0 / std::sqrt(1.0 - alpha_bar);
    Grid out(x_t.height, x_t.width);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = (x_t.values[i] - sab * x0_hat.values[i]) * inv;
    }
    return out;
}

Grid gmm_eps_predict(const Grid& x_t, int t, const GmmPrior& prior,
                     const NoiseSchedule& schedule) {
    if (t < 1 || t > schedule.steps()) {
        throw std::invalid_argument("gmm_eps_predict: t=" + std::to_string(t) + " outside [1, " +
                                    std::to_string(schedule.steps()) + "]");
    }
    double ab = schedule.alpha_bar(t);
    if (!(ab < 1.0)) {
        throw std::invalid_argument(
            "gmm_eps_predict: alpha_bar(t) must be < 1; t = 0 has no noise to predict");
    }
    Grid x0(x_t.height, x_t.width);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x0.values[i] = prior.posterior_x0(x_t.values[i], ab);
    }
    return eps_from_x0(x_t, x0, ab);
}

namespace {

// 1-D squared-exponential kernel over cell indices, unit marginal variance.
Eigen::MatrixXd se_kernel_1d(int n, double length_scale) {
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double d = i - j;
            k(i, j) = std::exp(-0.5 * d * d / (length_scale * length_scale));
        }
    }
    return k;
}

}  // namespace

GpPrior GpPrior::squared_exponential(int height, int width, double length_scale) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("GpPrior: patch dimensions must be >= 1");
    }
    if (!(length_scale > 0.0)) {
        throw std::invalid_argument("GpPrior: length_scale must be positive");
    }
    GpPrior p;
    p.height_ = height;
    p.width_ = width;
    p.separable_ = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> row_solver(se_kernel_1d(height, length_scale));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> col_solver(se_kernel_1d(width, length_scale));
    p.row_basis_ = row_solver.eigenvectors();
    p.row_eigs_ = row_solver.eigenvalues().cwiseMax(0.0);
    p.col_basis_ = col_solver.eigenvectors();
    p.col_eigs_ = col_solver.eigenvalues().cwiseMax(0.0);
    return p;
}

GpPrior GpPrior::from_covariance(int height, int width, const Eigen::MatrixXd& covariance) {
    const int n = height * width;
    if (height < 1 || width < 1) {
        throw std::invalid_argument("GpPrior: patch dimensions must be >= 1");
    }
    if (covariance.rows() != n || covariance.cols() != n) {
        throw std::invalid_argument("GpPrior: covariance must be " + std::to_string(n) + "x" +
                                    std::to_string(n));
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, covariance.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("GpPrior: covariance must be symmetric");
    }
    GpPrior p;
    p.height_ = height;
    p.width_ = width;
    p.separable_ = false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    double floor = -1e-8 * std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
    if (solver.eigenvalues().minCoeff() < floor) {
        throw std::invalid_argument("GpPrior: covariance is not positive semi-definite");
    }
    p.basis_ = solver.eigenvectors();
    p.eigs_ = solver.eigenvalues().cwiseMax(0.0);
    return p;
}

Grid GpPrior::posterior_x0(const Grid& x_t, double alpha_bar) const {
    if (x_t.height != height_ || x_t.width != width_) {
        throw std::invalid_argument("GpPrior: input " + std::to_string(x_t.height) + "x" +
                                    std::to_string(x_t.width) + " does not match patch shape " +
                                    std::to_string(height_) + "x" + std::to_string(width_));
    }
    const double ab = alpha_bar;
    const double rem = 1.0 - ab;
    const double sab = std::sqrt(ab);
    auto gain = [&](double lambda) { return sab * lambda / (ab * lambda + rem); };

    Grid out(height_, width_);
    if (separable_) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            x(x_t.values.data(), height_, width_);
        Eigen::MatrixXd coeffs = row_basis_.transpose() * x * col_basis_;
        for (int i = 0; i < height_; ++i) {
            for (int j = 0; j < width_; ++j) {
                coeffs(i, j) *= gain(row_eigs_(i) * col_eigs_(j));
            }
        }
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            result(out.values.data(), height_, width_);
        result = row_basis_ * coeffs * col_basis_.transpose();
    } else {
        Eigen::Map<const Eigen::VectorXd> x(x_t.values.data(), height_ * width_);
        Eigen::VectorXd coeffs = basis_.transpose() * x;
        for (int i = 0; i < coeffs.size(); ++i) coeffs(i) *= gain(eigs_(i));
        Eigen::Map<Eigen::VectorXd> result(out.values.data(), height_ * width_);
        result = basis_ * coeffs;
    }
    return out;
}

Eigen::MatrixXd GpPrior::dense_covariance() const {
    const int n = height_ * width_;
    if (!separable_) {
        return basis_ * eigs_.asDiagonal() * basis_.transpose();
    }
    Eigen::MatrixXd row_cov = row_basis_ * row_eigs_.asDiagonal() * row_basis_.transpose();
    Eigen::MatrixXd col_cov = col_basis_ * col_eigs_.asDiagonal() * col_basis_.transpose();
    Eigen::MatrixXd cov(n, n);
    for (int r1 = 0; r1 < height_; ++r1) {
        for (int c1 = 0; c1 < width_; ++c1) {
            for (int r2 = 0; r2 < height_; ++r2) {
                for (int c2 = 0; c2 < width_; ++c2) {
                    cov(r1 * width_ + c1, r2 * width_ + c2) = row_cov(r1, r2) * col_cov(c1, c2);
                }
            }
        }
    }
    return cov;
}

Eigen::VectorXd GpPrior::eigenvalues() const {
    if (!separable_) return eigs_;
    Eigen::VectorXd out(height_ * width_);
    for (int i = 0; i < height_; ++i) {
        for (int j = 0; j < width_; ++j) {
            out(i * width_ + j) = row_eigs_(i) * col_eigs_(j);
        }
    }
    return out;
}

const Eigen::MatrixXd& GpPrior::dense_basis() const {
    if (separable_) {
        throw std::logic_error("GpPrior: dense basis is not materialized for separable priors");
    }
    return basis_;
}

Grid gp_eps_predict(const Grid& x_t, int t, const GpPrior& prior, const NoiseSchedule& schedule) {
    if (t < 1 || t > schedule.steps()) {
        throw std::invalid_argument("gp_eps_predict: t=" + std::to_string(t) + " outside [1, " +
                                    std::to_string(schedule.steps()) + "]");
    }
    double ab = schedule.alpha_bar(t);
    return eps_from_x0(x_t, prior.posterior_x0(x_t, ab), ab);
}

Grid GmmDenoiser::predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const {
    return gmm_eps_predict(x_t, t, prior_, schedule);
}

Grid GpDenoiser::predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const {
    return gp_eps_predict(x_t, t, prior_, schedule);
}

}  // namespace tilediff
