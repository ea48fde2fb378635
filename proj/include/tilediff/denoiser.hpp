#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "tilediff/grid.hpp"
#include "tilediff/schedule.hpp"

namespace tilediff {

// Noise-prediction contract: shape-preserving and deterministic in (x_t, t).
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual Grid predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const = 0;
};

// Predicts zero noise everywhere; isolates the stochastic step/fusion
// statistics from any data prior.
class ZeroDenoiser final : public Denoiser {
public:
    Grid predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const override;
};

Grid zero_eps(const Grid& x_t, int t);

struct GmmComponent {
    double weight = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
};

// Per-pixel i.i.d. Gaussian-mixture prior with a closed-form posterior mean,
// giving an exact MMSE noise predictor.
class GmmPrior {
public:
    explicit GmmPrior(std::vector<GmmComponent> components);

    const std::vector<GmmComponent>& components() const { return components_; }

    // E[x0 | x_t] for a single cell at signal level alpha_bar < 1.
    double posterior_x0(double x_t, double alpha_bar) const;

private:
    std::vector<GmmComponent> components_;
};

Grid gmm_eps_predict(const Grid& x_t, int t, const GmmPrior& prior, const NoiseSchedule& schedule);

// Zero-mean Gaussian-process prior over a fixed patch shape, stored by its
// covariance eigendecomposition. Squared-exponential kernels factor over
// rows x cols, so their eigensystem is kept in Kronecker form
// (U = U_rows (x) U_cols, lambda = lambda_r (x) lambda_c); arbitrary
// covariances use the dense form. Both paths apply U f(lambda) U^T.
class GpPrior {
public:
    static GpPrior squared_exponential(int height, int width, double length_scale);
    static GpPrior from_covariance(int height, int width, const Eigen::MatrixXd& covariance);

    int height() const { return height_; }
    int width() const { return width_; }
    bool separable() const { return separable_; }

    // E[x0 | x_t] = U diag(sqrt(ab) l / (ab l + 1 - ab)) U^T x_t.
    Grid posterior_x0(const Grid& x_t, double alpha_bar) const;

    // Materializes C = U diag(lambda) U^T; intended for small patches.
    Eigen::MatrixXd dense_covariance() const;

    // All n = height*width eigenvalues (Kronecker products in the separable
    // case), unsorted.
    Eigen::VectorXd eigenvalues() const;

    // Dense orthonormal basis; only stored for from_covariance priors.
    const Eigen::MatrixXd& dense_basis() const;

private:
    GpPrior() = default;

    int height_ = 0;
    int width_ = 0;
    bool separable_ = false;
    Eigen::MatrixXd row_basis_, col_basis_;
    Eigen::VectorXd row_eigs_, col_eigs_;
    Eigen::MatrixXd basis_;
    Eigen::VectorXd eigs_;
};

Grid gp_eps_predict(const Grid& x_t, int t, const GpPrior& prior, const NoiseSchedule& schedule);

// eps_hat implied by a posterior-mean estimate of x0.
Grid eps_from_x0(const Grid& x_t, const Grid& x0_hat, double alpha_bar);

class GmmDenoiser final : public Denoiser {
public:
    explicit GmmDenoiser(GmmPrior prior) : prior_(std::move(prior)) {}
    Grid predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const override;
    const GmmPrior& prior() const { return prior_; }

private:
    GmmPrior prior_;
};

class GpDenoiser final : public Denoiser {
public:
    explicit GpDenoiser(GpPrior prior) : prior_(std::move(prior)) {}
    Grid predict_eps(const Grid& x_t, int t, const NoiseSchedule& schedule) const override;
    const GpPrior& prior() const { return prior_; }

private:
    GpPrior prior_;
};

}  // namespace tilediff
