#include "tilediff/style.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tilediff/errors.hpp"

namespace tilediff {

Grid slerp(const Grid& p, const Grid& q, double alpha) {
    require_same_shape(p, q, "slerp");
    if (alpha == 0.0) return p;
    if (alpha == 1.0) return q;

    double dot = 0.0, norm_p2 = 0.0, norm_q2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dot += p.values[i] * q.values[i];
        norm_p2 += p.values[i] * p.values[i];
        norm_q2 += q.values[i] * q.values[i];
    }
    if (norm_p2 == 0.0 || norm_q2 == 0.0) {
        throw std::invalid_argument("slerp: zero-norm input");
    }
    double cos_omega = dot / (std::sqrt(norm_p2) * std::sqrt(norm_q2));
    cos_omega = std::clamp(cos_omega, -1.0, 1.0);
    double omega = std::acos(cos_omega);

    Grid out(p.height, p.width);
    if (omega < 1e-6) {
        // nearly parallel: sin(omega) is ill-conditioned, lerp instead
        for (std::size_t i = 0; i < p.size(); ++i) {
            out.values[i] = (1.0 - alpha) * p.values[i] + alpha * q.values[i];
        }
        return out;
    }
    if (omega > std::numbers::pi - 1e-6) {
        throw std::invalid_argument("slerp: inputs are antipodal; the interpolation plane is "
                                    "ill-defined");
    }
    double inv_sin = 1.0 / std::sin(omega);
    double coeff_p = std::sin((1.0 - alpha) * omega) * inv_sin;
    double coeff_q = std::sin(alpha * omega) * inv_sin;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.values[i] = coeff_p * p.values[i] + coeff_q * q.values[i];
    }
    return out;
}

Grid apply_style_alignment(const Grid& canvas_noise, const StyleAlignConfig& config) {
    if (!(config.alpha >= 0.0) || !(config.alpha <= 1.0)) {
        throw ConfigError("style alignment: alpha must lie in [0, 1], got " +
                          std::to_string(config.alpha));
    }
    const int wh = config.window_height();
    const int ww = config.window_width();
    if (wh < 1 || ww < 1) {
        throw ConfigError("style alignment: reference noise is empty");
    }
    if (canvas_noise.height % wh != 0 || canvas_noise.width % ww != 0) {
        throw ConfigError("style alignment: canvas " + std::to_string(canvas_noise.height) + "x" +
                          std::to_string(canvas_noise.width) +
                          " is not divisible by the window " + std::to_string(wh) + "x" +
                          std::to_string(ww));
    }
    Grid out = canvas_noise;
    for (int r0 = 0; r0 < canvas_noise.height; r0 += wh) {
        for (int c0 = 0; c0 < canvas_noise.width; c0 += ww) {
            Region window{r0, c0, wh, ww};
            Grid aligned = slerp(crop(canvas_noise, window), config.reference_noise, config.alpha);
            scatter(aligned, window, out);
        }
    }
    return out;
}

}  // namespace tilediff
