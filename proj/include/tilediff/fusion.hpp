#pragma once

#include <span>

namespace tilediff {

enum class FusionStrategy { kMean, kGuided };
enum class VarianceMode { kPlain, kCorrected };

// Mean+Plain is plain joint-denoising averaging; Guided+Plain weights by the
// guidance map; Corrected modes restore the per-step sampling variance that
// averaging otherwise shrinks.
struct FusionConfig {
    FusionStrategy strategy = FusionStrategy::kMean;
    VarianceMode variance = VarianceMode::kPlain;
};

// Closed-form finalizers over running sums. The per-cell ops below and the
// canvas engine both go through these so they produce bit-identical values.
// All require n >= 2 / positive weight sums; the N = 1 identity case is
// handled by the callers before any arithmetic.
double fuse_mean_from_sums(double sum_x, int n);
double fuse_guided_from_sums(double sum_wx, double sum_w);
double fuse_vcf_weighted_from_sums(double sum_wx, double sum_wmu, double sum_w, double sum_w2);
double fuse_vcf_uniform_from_sums(double sum_x, double sum_mu, int n);

// Arithmetic mean of the overlapped samples.
double fuse_mean(std::span<const double> xs);

// Guidance-weighted average sum(w x) / sum(w); weights must be positive.
double fuse_guided(std::span<const double> xs, std::span<const double> ws);

// Variance-corrected average of N stochastic-step samples with their step
// means: sum(x)/sqrt(N) + (1 - sqrt(N)) mean(mu).
double fuse_vcf_uniform(std::span<const double> xs, std::span<const double> mus);

// Weighted variance-corrected average:
// sum(w x)/sqrt(sum w^2) + (1 - W/sqrt(sum w^2)) sum(w mu)/W, W = sum(w).
double fuse_vcf_weighted(std::span<const double> xs, std::span<const double> mus,
                         std::span<const double> ws);

// Dispatch on FusionConfig; Mean modes ignore ws, Plain modes ignore mus.
double fuse_cell(const FusionConfig& config, std::span<const double> xs,
                 std::span<const double> mus, std::span<const double> ws);

}  // namespace tilediff
