#pragma once

#include <cstdint>
#include <vector>

#include "tilediff/denoiser.hpp"
#include "tilediff/fusion.hpp"
#include "tilediff/sampler.hpp"
#include "tilediff/schedule.hpp"
#include "tilediff/tiling.hpp"

namespace tilediff {

// One reverse step on a two-patch 1-D overlap (canvas 1x3, windows 1x2) with
// the zero denoiser, repeated `trials` times with independent per-patch z.
// Measures the post-fusion variance at overlapped cells against the closed
// form: sigma^2 sum(w^2)/W^2 for plain modes, sigma^2 for corrected modes.
struct StepVarianceResult {
    int t = 0;
    int trials = 0;
    double sigma2 = 0.0;
    double measured_plain = 0.0;
    double expected_plain = 0.0;
    double ratio_plain = 1.0;
    double measured_corrected = 0.0;
    double expected_corrected = 0.0;
    double ratio_corrected = 1.0;
};

StepVarianceResult single_step_variance_experiment(const NoiseSchedule& schedule,
                                                   SamplerMethod method, SigmaVariant variant,
                                                   FusionStrategy strategy, int trials,
                                                   std::uint64_t seed);

// Full zero-denoiser chains over a panorama layout, one ensemble per fusion
// variance mode with paired seeds. Reports the per-pixel ensemble variance of
// x_0 averaged over maximal-overlap columns, normalized by the single-cover
// columns.
struct ChainVarianceResult {
    int seeds = 0;
    int max_coverage = 0;
    double overlap_variance_plain = 0.0;
    double single_variance_plain = 0.0;
    double ratio_plain = 0.0;
    double overlap_variance_corrected = 0.0;
    double single_variance_corrected = 0.0;
    double ratio_corrected = 0.0;
};

ChainVarianceResult chain_variance_experiment(const NoiseSchedule& schedule,
                                              SigmaVariant variant, const TileLayout& layout,
                                              const GuidanceMap& guidance,
                                              FusionStrategy strategy, int num_seeds,
                                              std::uint64_t seed_base);

// Paired-seed seam comparison between plain averaging (MD) and guided fusion
// (GF); boundary columns are the layout's coverage transitions.
struct SeamPair {
    std::uint64_t seed = 0;
    double md = 0.0;
    double gf = 0.0;
};

struct SeamTestResult {
    std::vector<SeamPair> pairs;
    double mean_md = 0.0;
    double mean_gf = 0.0;
    int gf_wins = 0;                // seeds where gf < md
    double sign_test_p = 1.0;       // one-sided, H1: gf < md
};

SeamTestResult seam_experiment(const Denoiser& denoiser, const SamplerConfig& sampler,
                               const NoiseSchedule& schedule, const TileLayout& layout,
                               const GuidanceMap& guidance,
                               const std::vector<std::uint64_t>& seeds);

// Mean pairwise cosine similarity / angle among the non-overlapped window
// crops of a style-aligned canvas, averaged over `trials` random canvases,
// for each alpha in `alphas`.
struct StyleSweepResult {
    std::vector<double> alphas;
    std::vector<double> mean_cosine;  // one entry per alpha
    std::vector<double> mean_angle;
    int trials = 0;
};

StyleSweepResult style_sweep_experiment(int canvas_h, int canvas_w, int window_h, int window_w,
                                        const std::vector<double>& alphas, int trials,
                                        std::uint64_t seed_base, std::uint64_t ref_seed);

// Mean pairwise cosine / angle among the non-overlapped window crops of one
// canvas (angles averaged per pair).
struct PairwiseStats {
    double mean_cosine = 0.0;
    double mean_angle = 0.0;
};

PairwiseStats pairwise_crop_stats(const Grid& canvas, int window_h, int window_w);
double mean_pairwise_cosine(const Grid& canvas, int window_h, int window_w);

// One-sided sign-test p-value for observing >= wins successes in n fair trials.
double sign_test_p_value(int wins, int n);

}  // namespace tilediff
