#include "tilediff/fusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tilediff {

namespace {

void check_nonempty(std::span<const double> xs, const char* op) {
    if (xs.empty()) throw std::invalid_argument(std::string(op) + ": empty input");
}

void check_same_length(std::span<const double> a, std::span<const double> b, const char* op) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(op) + ": length mismatch " +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

void check_positive_weights(std::span<const double> ws, const char* op) {
    for (double w : ws) {
        if (!(w > 0.0)) {
            throw std::invalid_argument(std::string(op) + ": weights must be positive, got " +
                                        std::to_string(w));
        }
    }
}

}  // namespace

double fuse_mean_from_sums(double sum_x, int n) { return sum_x / static_cast<double>(n); }

double fuse_guided_from_sums(double sum_wx, double sum_w) { return sum_wx / sum_w; }

// Eq-equivalent regrouping of the corrected average: weighted mean of the
// step means plus the residual sum(w (x - mu)) rescaled by sqrt(sum w^2).
// This form makes x == mu collapse to the weighted mean with the same bits.
double fuse_vcf_weighted_from_sums(double sum_wx, double sum_wmu, double sum_w, double sum_w2) {
    return sum_wmu / sum_w + (sum_wx - sum_wmu) / std::sqrt(sum_w2);
}

double fuse_vcf_uniform_from_sums(double sum_x, double sum_mu, int n) {
    return fuse_vcf_weighted_from_sums(sum_x, sum_mu, static_cast<double>(n),
                                       static_cast<double>(n));
}

double fuse_mean(std::span<const double> xs) {
    check_nonempty(xs, "fuse_mean");
    if (xs.size() == 1) return xs[0];
    double sum_x = 0.0;
    for (double x : xs) sum_x += x;
    return fuse_mean_from_sums(sum_x, static_cast<int>(xs.size()));
}

double fuse_guided(std::span<const double> xs, std::span<const double> ws) {
    check_nonempty(xs, "fuse_guided");
    check_same_length(xs, ws, "fuse_guided");
    check_positive_weights(ws, "fuse_guided");
    if (xs.size() == 1) return xs[0];
    double sum_wx = 0.0, sum_w = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum_wx += ws[i] * xs[i];
        sum_w += ws[i];
    }
    return fuse_guided_from_sums(sum_wx, sum_w);
}

double fuse_vcf_uniform(std::span<const double> xs, std::span<const double> mus) {
    check_nonempty(xs, "fuse_vcf_uniform");
    check_same_length(xs, mus, "fuse_vcf_uniform");
    if (xs.size() == 1) return xs[0];
    double sum_x = 0.0, sum_mu = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum_x += xs[i];
        sum_mu += mus[i];
    }
    return fuse_vcf_uniform_from_sums(sum_x, sum_mu, static_cast<int>(xs.size()));
}

double fuse_vcf_weighted(std::span<const double> xs, std::span<const double> mus,
                         std::span<const double> ws) {
    check_nonempty(xs, "fuse_vcf_weighted");
    check_same_length(xs, mus, "fuse_vcf_weighted");
    check_same_length(xs, ws, "fuse_vcf_weighted");
    check_positive_weights(ws, "fuse_vcf_weighted");
    if (xs.size() == 1) return xs[0];
    double sum_wx = 0.0, sum_wmu = 0.0, sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum_wx += ws[i] * xs[i];
        sum_wmu += ws[i] * mus[i];
        sum_w += ws[i];
        sum_w2 += ws[i] * ws[i];
    }
    return fuse_vcf_weighted_from_sums(sum_wx, sum_wmu, sum_w, sum_w2);
}

double fuse_cell(const FusionConfig& config, std::span<const double> xs,
                 std::span<const double> mus, std::span<const double> ws) {
    const bool guided = config.strategy == FusionStrategy::kGuided;
    const bool corrected = config.variance == VarianceMode::kCorrected;
    if (!guided && !corrected) return fuse_mean(xs);
    if (guided && !corrected) return fuse_guided(xs, ws);
    if (!guided) return fuse_vcf_uniform(xs, mus);
    return fuse_vcf_weighted(xs, mus, ws);
}

}  // namespace tilediff
