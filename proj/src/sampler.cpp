#include "tilediff/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tilediff/errors.hpp"
#include "tilediff/rng.hpp"

namespace tilediff {

StepOutput ddpm_step(const Grid& x_t, const Grid& eps_hat, int t, const NoiseSchedule& schedule,
                     SigmaVariant variant, const Grid& z) {
    require_same_shape(x_t, eps_hat, "ddpm_step");
    require_same_shape(x_t, z, "ddpm_step");
    if (t < 1 || t > schedule.steps()) {
        throw std::invalid_argument("ddpm_step: t=" + std::to_string(t) + " outside [1, " +
                                    std::to_string(schedule.steps()) + "]");
    }
    const double inv_sqrt_alpha = 1.0 / std::sqrt(schedule.alpha(t));
    const double eps_coef = schedule.beta(t) / std::sqrt(1.0 - schedule.alpha_bar(t));
    const double sig = schedule.sigma(t, variant);

    StepOutput out;
    out.mean = Grid(x_t.height, x_t.width);
    out.x_prev = Grid(x_t.height, x_t.width);
    for (std::size_t i = 0; i < x_t.size(); ++i) {
        double mu = inv_sqrt_alpha * (x_t.values[i] - eps_coef * eps_hat.values[i]);
        out.mean.values[i] = mu;
        out.x_prev.values[i] = mu + sig * z.values[i];
    }
    return out;
}

Grid ddim_update(const Grid& x_t, const Grid& eps_hat, double alpha_bar_t,
                 double alpha_bar_next) {
    require_same_shape(x_t, eps_hat, "ddim_update");
    const double sab_t = std::sqrt(alpha_bar_t);
    const double rem_t = std::sqrt(1.0 - alpha_bar_t);
    const double sab_n = std::sqrt(alpha_bar_next);
    const double rem_n = std::sqrt(1.0 - alpha_bar_next);
    Grid out(x_t.height, x_t.width);
    for (std::size_t i = 0; i < x_t.size(); ++i) {
        double x0 = (x_t.values[i] - rem_t * eps_hat.values[i]) / sab_t;
        out.values[i] = sab_n * x0 + rem_n * eps_hat.values[i];
    }
    return out;
}

StepOutput ddim_step(const Grid& x_t, const Grid& eps_hat, int t, int t_next,
                     const NoiseSchedule& schedule) {
    if (t_next >= t) {
        throw std::invalid_argument("ddim_step: t_next=" + std::to_string(t_next) +
                                    " must be < t=" + std::to_string(t));
    }
    if (t < 1 || t > schedule.steps() || t_next < 0) {
        throw std::invalid_argument("ddim_step: invalid timestep pair (" + std::to_string(t) +
                                    ", " + std::to_string(t_next) + ")");
    }
    StepOutput out;
    out.x_prev = ddim_update(x_t, eps_hat, schedule.alpha_bar(t), schedule.alpha_bar(t_next));
    out.mean = out.x_prev;
    return out;
}

std::vector<int> ddim_timesteps(int T, int steps) {
    if (steps < 1 || steps > T) {
        throw ConfigError("ddim_timesteps: steps=" + std::to_string(steps) +
                          " must lie in [1, T=" + std::to_string(T) + "]");
    }
    std::vector<int> taus(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        taus[i] = static_cast<int>(std::llround(static_cast<double>(T) * i / steps));
    }
    // descending: {T, ..., 0}
    std::vector<int> out(taus.rbegin(), taus.rend());
    return out;
}

Grid sample_chain(const Denoiser& denoiser, const SamplerConfig& sampler,
                  const NoiseSchedule& schedule, Grid x_start, const NoiseProvider& z_for,
                  int patch_index) {
    Grid x = std::move(x_start);
    const int T = schedule.steps();
    if (sampler.method == SamplerMethod::kDdpm) {
        for (int t = T; t >= 1; --t) {
            Grid eps = denoiser.predict_eps(x, t, schedule);
            Grid z = (t > 1) ? z_for(patch_index, t) : Grid::zeros(x.height, x.width);
            x = ddpm_step(x, eps, t, schedule, sampler.sigma_variant, z).x_prev;
        }
    } else {
        std::vector<int> taus = ddim_timesteps(T, sampler.ddim_steps);
        for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
            int t = taus[k];
            int t_next = taus[k + 1];
            Grid eps = denoiser.predict_eps(x, t, schedule);
            x = ddim_step(x, eps, t, t_next, schedule).x_prev;
        }
    }
    return x;
}

Grid sample_single(const Denoiser& denoiser, const SamplerConfig& sampler,
                   const NoiseSchedule& schedule, int height, int width, std::uint64_t seed) {
    RngStream init(seed, NoisePurpose::kCanvasInit, 0, 0);
    Grid x = gaussian_grid(height, width, init);
    NoiseProvider z_for = [seed, height, width](int patch, int t) {
        RngStream zs(seed, NoisePurpose::kStepNoise, static_cast<std::uint64_t>(patch),
                     static_cast<std::uint64_t>(t));
        return gaussian_grid(height, width, zs);
    };
    return sample_chain(denoiser, sampler, schedule, std::move(x), z_for, 0);
}

namespace {

// Fold one patch's step output into the per-cell running sums; patches are
// accumulated in ascending index order so the cell sums are reproducible.
struct FusionAccumulators {
    Grid count;    // covering patches per cell (layout constant)
    Grid sum_w;    // guidance-weight sums (layout constant)
    Grid sum_w2;
    Grid sum_x;
    Grid sum_wx;
    Grid sum_mu;
    Grid sum_wmu;
};

void reset_step_sums(FusionAccumulators& acc) {
    std::fill(acc.sum_x.values.begin(), acc.sum_x.values.end(), 0.0);
    std::fill(acc.sum_wx.values.begin(), acc.sum_wx.values.end(), 0.0);
    std::fill(acc.sum_mu.values.begin(), acc.sum_mu.values.end(), 0.0);
    std::fill(acc.sum_wmu.values.begin(), acc.sum_wmu.values.end(), 0.0);
}

void accumulate_patch(FusionAccumulators& acc, const StepOutput& step, const Region& region,
                      const GuidanceMap& guidance) {
    for (int r = 0; r < region.height; ++r) {
        int cr = region.row0 + r;
        for (int c = 0; c < region.width; ++c) {
            int cc = region.col0 + c;
            double w = guidance.at(r, c);
            double x = step.x_prev.at(r, c);
            double mu = step.mean.at(r, c);
            acc.sum_x.at(cr, cc) += x;
            acc.sum_wx.at(cr, cc) += w * x;
            acc.sum_mu.at(cr, cc) += mu;
            acc.sum_wmu.at(cr, cc) += w * mu;
        }
    }
}

void finalize_fusion(const FusionAccumulators& acc, const FusionConfig& fusion, Grid& canvas) {
    const bool guided = fusion.strategy == FusionStrategy::kGuided;
    const bool corrected = fusion.variance == VarianceMode::kCorrected;
    for (std::size_t i = 0; i < canvas.size(); ++i) {
        int n = static_cast<int>(acc.count.values[i]);
        if (n == 1) {
            // single cover: every strategy is the identity on the raw sample
            canvas.values[i] = acc.sum_x.values[i];
        } else if (!guided && !corrected) {
            canvas.values[i] = fuse_mean_from_sums(acc.sum_x.values[i], n);
        } else if (guided && !corrected) {
            canvas.values[i] = fuse_guided_from_sums(acc.sum_wx.values[i], acc.sum_w.values[i]);
        } else if (!guided) {
            canvas.values[i] =
                fuse_vcf_uniform_from_sums(acc.sum_x.values[i], acc.sum_mu.values[i], n);
        } else {
            canvas.values[i] =
                fuse_vcf_weighted_from_sums(acc.sum_wx.values[i], acc.sum_wmu.values[i],
                                            acc.sum_w.values[i], acc.sum_w2.values[i]);
        }
    }
}

}  // namespace

Grid sample_joint_from(const Denoiser& denoiser, const SamplerConfig& sampler,
                       const NoiseSchedule& schedule, const TileLayout& layout,
                       const GuidanceMap& guidance, const FusionConfig& fusion, Grid canvas_init,
                       const NoiseProvider& z_for, const StepObserver& observer) {
    if (canvas_init.height != layout.canvas_height() ||
        canvas_init.width != layout.canvas_width()) {
        throw std::invalid_argument("sample_joint: canvas noise shape does not match layout");
    }
    if (guidance.height != layout.window_height() || guidance.width != layout.window_width()) {
        throw std::invalid_argument("sample_joint: guidance map shape does not match window");
    }

    const int H = layout.canvas_height();
    const int W = layout.canvas_width();
    FusionAccumulators acc{coverage_count(layout), Grid::zeros(H, W), Grid::zeros(H, W),
                           Grid::zeros(H, W),      Grid::zeros(H, W), Grid::zeros(H, W),
                           Grid::zeros(H, W)};
    for (const Region& p : layout.patches()) {
        for (int r = 0; r < p.height; ++r) {
            for (int c = 0; c < p.width; ++c) {
                double w = guidance.at(r, c);
                acc.sum_w.at(p.row0 + r, p.col0 + c) += w;
                acc.sum_w2.at(p.row0 + r, p.col0 + c) += w * w;
            }
        }
    }

    Grid canvas = std::move(canvas_init);
    const int T = schedule.steps();
    const bool ddpm = sampler.method == SamplerMethod::kDdpm;
    std::vector<int> taus;
    if (ddpm) {
        taus.resize(T + 1);
        for (int i = 0; i <= T; ++i) taus[i] = T - i;
    } else {
        taus = ddim_timesteps(T, sampler.ddim_steps);
    }

    for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
        const int t = taus[k];
        const int t_next = taus[k + 1];
        reset_step_sums(acc);
        const auto& patches = layout.patches();
        for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
            Grid x_patch = crop(canvas, patches[p]);
            Grid eps = denoiser.predict_eps(x_patch, t, schedule);
            StepOutput step;
            if (ddpm) {
                Grid z = (t > 1) ? z_for(p, t)
                                 : Grid::zeros(layout.window_height(), layout.window_width());
                step = ddpm_step(x_patch, eps, t, schedule, sampler.sigma_variant, z);
            } else {
                step = ddim_step(x_patch, eps, t, t_next, schedule);
            }
            accumulate_patch(acc, step, patches[p], guidance);
        }
        finalize_fusion(acc, fusion, canvas);
        require_finite(canvas, "sample_joint canvas");
        if (observer) observer(t_next, canvas);
    }
    return canvas;
}

Grid sample_joint(const Denoiser& denoiser, const SamplerConfig& sampler,
                  const NoiseSchedule& schedule, const TileLayout& layout,
                  const GuidanceMap& guidance, const FusionConfig& fusion,
                  const std::optional<StyleAlignConfig>& style, std::uint64_t seed,
                  const StepObserver& observer) {
    RngStream init(seed, NoisePurpose::kCanvasInit, 0, 0);
    Grid canvas = gaussian_grid(layout.canvas_height(), layout.canvas_width(), init);
    if (style && style->alpha > 0.0) {
        canvas = apply_style_alignment(canvas, *style);
    }
    const int wh = layout.window_height();
    const int ww = layout.window_width();
    NoiseProvider z_for = [seed, wh, ww](int patch, int t) {
        RngStream zs(seed, NoisePurpose::kStepNoise, static_cast<std::uint64_t>(patch),
                     static_cast<std::uint64_t>(t));
        return gaussian_grid(wh, ww, zs);
    };
    return sample_joint_from(denoiser, sampler, schedule, layout, guidance, fusion,
                             std::move(canvas), z_for, observer);
}

}  // namespace tilediff
