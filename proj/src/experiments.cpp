#include "tilediff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilediff/errors.hpp"
#include "tilediff/metrics.hpp"
#include "tilediff/rng.hpp"

namespace tilediff {

namespace {

struct RunningVariance {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double variance() const {
        double mean = sum / n;
        return (sumsq - n * mean * mean) / (n - 1);
    }
};

}  // namespace

StepVarianceResult single_step_variance_experiment(const NoiseSchedule& schedule,
                                                   SamplerMethod method, SigmaVariant variant,
                                                   FusionStrategy strategy, int trials,
                                                   std::uint64_t seed) {
    if (trials < 2) {
        throw std::invalid_argument("single_step_variance_experiment: trials must be >= 2");
    }
    // Two 1x2 windows on a 1x3 canvas; the middle cell is the two-patch
    // overlap of the toy setup.
    TileLayout layout = make_layout(1, 3, 1, 2, 1, 1);
    GuidanceMap guidance = make_guidance_map(1, 2, 1e-4);
    Grid cover = coverage_count(layout);

    const int t = schedule.steps();
    const double sig2 = schedule.sigma2(t, variant);
    ZeroDenoiser zero;

    RngStream init(seed, NoisePurpose::kCanvasInit, 0, 0);
    Grid canvas = gaussian_grid(1, 3, init);

    // Per-overlap-cell weight sums for the closed-form expectations.
    const auto& patches = layout.patches();
    std::vector<int> overlap_cells;
    for (int c = 0; c < 3; ++c) {
        if (cover.at(0, c) >= 2.0) overlap_cells.push_back(c);
    }

    std::vector<RunningVariance> plain(overlap_cells.size());
    std::vector<RunningVariance> corrected(overlap_cells.size());

    std::vector<double> xs, mus, ws;
    for (int m = 0; m < trials; ++m) {
        // one reverse step per patch with an independent z
        std::vector<StepOutput> steps(patches.size());
        for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
            Grid x_patch = crop(canvas, patches[p]);
            Grid eps = zero.predict_eps(x_patch, t, schedule);
            if (method == SamplerMethod::kDdpm) {
                RngStream zs(seed, NoisePurpose::kTrial, static_cast<std::uint64_t>(p),
                             static_cast<std::uint64_t>(m));
                Grid z = gaussian_grid(1, 2, zs);
                steps[p] = ddpm_step(x_patch, eps, t, schedule, variant, z);
            } else {
                steps[p] = ddim_step(x_patch, eps, t, t - 1, schedule);
            }
        }
        for (std::size_t oc = 0; oc < overlap_cells.size(); ++oc) {
            int c = overlap_cells[oc];
            xs.clear();
            mus.clear();
            ws.clear();
            for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
                const Region& reg = patches[p];
                if (c >= reg.col0 && c < reg.col_end()) {
                    xs.push_back(steps[p].x_prev.at(0, c - reg.col0));
                    mus.push_back(steps[p].mean.at(0, c - reg.col0));
                    ws.push_back(strategy == FusionStrategy::kGuided
                                     ? guidance.at(0, c - reg.col0)
                                     : 1.0);
                }
            }
            plain[oc].add(fuse_cell({strategy, VarianceMode::kPlain}, xs, mus, ws));
            corrected[oc].add(fuse_cell({strategy, VarianceMode::kCorrected}, xs, mus, ws));
        }
    }

    StepVarianceResult result;
    result.t = t;
    result.trials = trials;
    result.sigma2 = sig2;

    double expected_plain = 0.0;
    for (std::size_t oc = 0; oc < overlap_cells.size(); ++oc) {
        int c = overlap_cells[oc];
        double sum_w = 0.0, sum_w2 = 0.0;
        for (const Region& reg : patches) {
            if (c >= reg.col0 && c < reg.col_end()) {
                double w = strategy == FusionStrategy::kGuided ? guidance.at(0, c - reg.col0)
                                                               : 1.0;
                sum_w += w;
                sum_w2 += w * w;
            }
        }
        expected_plain += sig2 * sum_w2 / (sum_w * sum_w);
    }
    expected_plain /= static_cast<double>(overlap_cells.size());

    double measured_plain = 0.0, measured_corrected = 0.0;
    for (std::size_t oc = 0; oc < overlap_cells.size(); ++oc) {
        measured_plain += plain[oc].variance();
        measured_corrected += corrected[oc].variance();
    }
    measured_plain /= static_cast<double>(overlap_cells.size());
    measured_corrected /= static_cast<double>(overlap_cells.size());

    result.measured_plain = measured_plain;
    result.measured_corrected = measured_corrected;
    if (method == SamplerMethod::kDdim) {
        // deterministic sampler: both measured and expected variances are 0
        result.expected_plain = 0.0;
        result.expected_corrected = 0.0;
        result.ratio_plain = 1.0;
        result.ratio_corrected = 1.0;
    } else {
        result.expected_plain = expected_plain;
        result.expected_corrected = sig2;
        result.ratio_plain = measured_plain / expected_plain;
        result.ratio_corrected = measured_corrected / sig2;
    }
    return result;
}

ChainVarianceResult chain_variance_experiment(const NoiseSchedule& schedule, SigmaVariant variant,
                                              const TileLayout& layout,
                                              const GuidanceMap& guidance,
                                              FusionStrategy strategy, int num_seeds,
                                              std::uint64_t seed_base) {
    if (num_seeds < 2) {
        throw std::invalid_argument("chain_variance_experiment: needs at least two seeds");
    }
    Grid cover = coverage_count(layout);
    double max_cover = 0.0;
    for (double v : cover.values) max_cover = std::max(max_cover, v);

    ZeroDenoiser zero;
    SamplerConfig sampler{SamplerMethod::kDdpm, variant, 0};

    ChainVarianceResult result;
    result.seeds = num_seeds;
    result.max_coverage = static_cast<int>(max_cover);

    for (VarianceMode mode : {VarianceMode::kPlain, VarianceMode::kCorrected}) {
        FusionConfig fusion{strategy, mode};
        const std::size_t cells = cover.size();
        std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
        for (int k = 0; k < num_seeds; ++k) {
            Grid canvas = sample_joint(zero, sampler, schedule, layout, guidance, fusion,
                                       std::nullopt, seed_base + static_cast<std::uint64_t>(k));
            for (std::size_t i = 0; i < cells; ++i) {
                sum[i] += canvas.values[i];
                sumsq[i] += canvas.values[i] * canvas.values[i];
            }
        }
        double overlap_total = 0.0, single_total = 0.0;
        long overlap_n = 0, single_n = 0;
        for (std::size_t i = 0; i < cells; ++i) {
            double mean = sum[i] / num_seeds;
            double var = (sumsq[i] - num_seeds * mean * mean) / (num_seeds - 1);
            if (cover.values[i] == max_cover && max_cover > 1.0) {
                overlap_total += var;
                ++overlap_n;
            } else if (cover.values[i] == 1.0) {
                single_total += var;
                ++single_n;
            }
        }
        if (overlap_n == 0 || single_n == 0) {
            throw std::invalid_argument(
                "chain_variance_experiment: layout must contain both overlapped and "
                "single-cover cells");
        }
        double overlap_var = overlap_total / overlap_n;
        double single_var = single_total / single_n;
        if (mode == VarianceMode::kPlain) {
            result.overlap_variance_plain = overlap_var;
            result.single_variance_plain = single_var;
            result.ratio_plain = overlap_var / single_var;
        } else {
            result.overlap_variance_corrected = overlap_var;
            result.single_variance_corrected = single_var;
            result.ratio_corrected = overlap_var / single_var;
        }
    }
    return result;
}

double sign_test_p_value(int wins, int n) {
    if (n < 1 || wins < 0 || wins > n) {
        throw std::invalid_argument("sign_test_p_value: invalid counts");
    }
    // P(Bin(n, 1/2) >= wins), exact
    double p = 0.0;
    for (int k = wins; k <= n; ++k) {
        double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n - k + 1.0) - n * std::log(2.0);
        p += std::exp(log_term);
    }
    return std::min(1.0, p);
}

SeamTestResult seam_experiment(const Denoiser& denoiser, const SamplerConfig& sampler,
                               const NoiseSchedule& schedule, const TileLayout& layout,
                               const GuidanceMap& guidance,
                               const std::vector<std::uint64_t>& seeds) {
    if (seeds.size() < 2) {
        throw std::invalid_argument("seam_experiment: needs at least two seeds");
    }
    std::vector<int> cols = boundary_columns(layout);
    if (cols.empty()) {
        throw std::invalid_argument("seam_experiment: layout has no coverage transitions");
    }

    SeamTestResult result;
    FusionConfig md{FusionStrategy::kMean, VarianceMode::kPlain};
    FusionConfig gf{FusionStrategy::kGuided, VarianceMode::kPlain};
    for (std::uint64_t seed : seeds) {
        Grid canvas_md =
            sample_joint(denoiser, sampler, schedule, layout, guidance, md, std::nullopt, seed);
        Grid canvas_gf =
            sample_joint(denoiser, sampler, schedule, layout, guidance, gf, std::nullopt, seed);
        SeamPair pair;
        pair.seed = seed;
        pair.md = seam_energy(canvas_md, cols);
        pair.gf = seam_energy(canvas_gf, cols);
        result.pairs.push_back(pair);
        result.mean_md += pair.md;
        result.mean_gf += pair.gf;
        if (pair.gf < pair.md) ++result.gf_wins;
    }
    result.mean_md /= static_cast<double>(seeds.size());
    result.mean_gf /= static_cast<double>(seeds.size());
    result.sign_test_p = sign_test_p_value(result.gf_wins, static_cast<int>(seeds.size()));
    return result;
}

PairwiseStats pairwise_crop_stats(const Grid& canvas, int window_h, int window_w) {
    if (window_h < 1 || window_w < 1 || canvas.height % window_h != 0 ||
        canvas.width % window_w != 0) {
        throw std::invalid_argument("pairwise_crop_stats: canvas not divisible by window");
    }
    std::vector<Grid> crops;
    for (int r0 = 0; r0 < canvas.height; r0 += window_h) {
        for (int c0 = 0; c0 < canvas.width; c0 += window_w) {
            crops.push_back(crop(canvas, Region{r0, c0, window_h, window_w}));
        }
    }
    if (crops.size() < 2) {
        throw std::invalid_argument("pairwise_crop_stats: needs at least two crops");
    }
    PairwiseStats stats;
    long pairs = 0;
    for (std::size_t i = 0; i < crops.size(); ++i) {
        for (std::size_t j = i + 1; j < crops.size(); ++j) {
            double dot = 0.0, ni = 0.0, nj = 0.0;
            for (std::size_t k = 0; k < crops[i].size(); ++k) {
                dot += crops[i].values[k] * crops[j].values[k];
                ni += crops[i].values[k] * crops[i].values[k];
                nj += crops[j].values[k] * crops[j].values[k];
            }
            double cosine = std::clamp(dot / std::sqrt(ni * nj), -1.0, 1.0);
            stats.mean_cosine += cosine;
            stats.mean_angle += std::acos(cosine);
            ++pairs;
        }
    }
    stats.mean_cosine /= pairs;
    stats.mean_angle /= pairs;
    return stats;
}

double mean_pairwise_cosine(const Grid& canvas, int window_h, int window_w) {
    return pairwise_crop_stats(canvas, window_h, window_w).mean_cosine;
}

StyleSweepResult style_sweep_experiment(int canvas_h, int canvas_w, int window_h, int window_w,
                                        const std::vector<double>& alphas, int trials,
                                        std::uint64_t seed_base, std::uint64_t ref_seed) {
    if (trials < 1) throw std::invalid_argument("style_sweep_experiment: trials must be >= 1");
    if (alphas.empty()) throw std::invalid_argument("style_sweep_experiment: empty alpha grid");

    StyleSweepResult result;
    result.alphas = alphas;
    result.trials = trials;
    result.mean_cosine.assign(alphas.size(), 0.0);
    result.mean_angle.assign(alphas.size(), 0.0);

    RngStream ref_stream(ref_seed, NoisePurpose::kStyleRef, 0, 0);
    Grid reference = gaussian_grid(window_h, window_w, ref_stream);

    for (int trial = 0; trial < trials; ++trial) {
        RngStream init(seed_base + static_cast<std::uint64_t>(trial), NoisePurpose::kCanvasInit,
                       0, 0);
        Grid canvas = gaussian_grid(canvas_h, canvas_w, init);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            StyleAlignConfig cfg{alphas[a], reference};
            Grid aligned = apply_style_alignment(canvas, cfg);
            PairwiseStats stats = pairwise_crop_stats(aligned, window_h, window_w);
            result.mean_cosine[a] += stats.mean_cosine;
            result.mean_angle[a] += stats.mean_angle;
        }
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        result.mean_cosine[a] /= trials;
        result.mean_angle[a] /= trials;
    }
    return result;
}

}  // namespace tilediff
