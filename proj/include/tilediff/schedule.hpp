#pragma once

#include <vector>

#include "tilediff/grid.hpp"

namespace tilediff {

// Reverse-process noise scale: sigma_t^2 = beta_t, or the posterior value
// sigma_t^2 = (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t) * beta_t.
enum class SigmaVariant { kBeta, kTildeBeta };

// beta_t / alpha_t / alpha_bar_t tables, 1-indexed by timestep t = 1..T.
// alpha_bar(0) is defined as 1.
class NoiseSchedule {
public:
    static NoiseSchedule linear(int T, double beta_start, double beta_end);

    int steps() const { return T_; }
    double beta(int t) const;       // 1 <= t <= T
    double alpha(int t) const;      // 1 - beta(t)
    double alpha_bar(int t) const;  // 0 <= t <= T
    double sigma2(int t, SigmaVariant variant) const;
    double sigma(int t, SigmaVariant variant) const;

    NoiseSchedule() = default;  // empty; populate via the factory

private:

    int T_ = 0;
    std::vector<double> betas_;       // betas_[t-1] = beta_t
    std::vector<double> alpha_bars_;  // alpha_bars_[t], size T+1, [0] = 1
};

NoiseSchedule linear_schedule(int T, double beta_start, double beta_end);

// Closed-form forward marginal: sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps.
// t = 0 is allowed and returns x0 unchanged.
Grid forward_diffuse(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule);

double sigma(const NoiseSchedule& schedule, int t, SigmaVariant variant);

}  // namespace tilediff
