#include "tilediff/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tilediff {

NoiseSchedule NoiseSchedule::linear(int T, double beta_start, double beta_end) {
    if (T < 1) {
        throw std::invalid_argument("linear_schedule: T must be >= 1, got " + std::to_string(T));
    }
    if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
        throw std::invalid_argument(
            "linear_schedule: need 0 < beta_start <= beta_end < 1, got beta_start=" +
            std::to_string(beta_start) + " beta_end=" + std::to_string(beta_end));
    }
    NoiseSchedule s;
    s.T_ = T;
    s.betas_.resize(T);
    if (T == 1) {
        s.betas_[0] = beta_start;
    } else {
        for (int i = 0; i < T; ++i) {
            s.betas_[i] = beta_start + (beta_end - beta_start) * i / (T - 1);
        }
    }
    s.alpha_bars_.resize(T + 1);
    s.alpha_bars_[0] = 1.0;
    for (int t = 1; t <= T; ++t) {
        s.alpha_bars_[t] = s.alpha_bars_[t - 1] * (1.0 - s.betas_[t - 1]);
    }
    return s;
}

double NoiseSchedule::beta(int t) const {
    if (t < 1 || t > T_) {
        throw std::out_of_range("beta: t=" + std::to_string(t) + " outside [1, " +
                                std::to_string(T_) + "]");
    }
    return betas_[t - 1];
}

double NoiseSchedule::alpha(int t) const { return 1.0 - beta(t); }

double NoiseSchedule::alpha_bar(int t) const {
    if (t < 0 || t > T_) {
        throw std::out_of_range("alpha_bar: t=" + std::to_string(t) + " outside [0, " +
                                std::to_string(T_) + "]");
    }
    return alpha_bars_[t];
}

double NoiseSchedule::sigma2(int t, SigmaVariant variant) const {
    double b = beta(t);
    if (variant == SigmaVariant::kBeta) return b;
    // (1 - alpha_bar_{t-1}) / (1 - alpha_bar_t) * beta_t; zero at t = 1 since
    // alpha_bar(0) = 1
    return (1.0 - alpha_bar(t - 1)) / (1.0 - alpha_bar(t)) * b;
}

double NoiseSchedule::sigma(int t, SigmaVariant variant) const {
    return std::sqrt(sigma2(t, variant));
}

NoiseSchedule linear_schedule(int T, double beta_start, double beta_end) {
    return NoiseSchedule::linear(T, beta_start, beta_end);
}

Grid forward_diffuse(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule) {
    require_same_shape(x0, eps, "forward_diffuse");
    double ab = schedule.alpha_bar(t);  // validates 0 <= t <= T
    double signal = std::sqrt(ab);
    double noise = std::sqrt(1.0 - ab);
    Grid out(x0.height, x0.width);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = signal * x0.values[i] + noise * eps.values[i];
    }
    return out;
}

double sigma(const NoiseSchedule& schedule, int t, SigmaVariant variant) {
    return schedule.sigma(t, variant);
}

}  // namespace tilediff
