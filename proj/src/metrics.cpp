#include "tilediff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tilediff {

double seam_energy(const Grid& grid, std::span<const int> boundary_cols) {
    if (boundary_cols.empty()) {
        throw std::invalid_argument("seam_energy: empty boundary column list");
    }
    if (grid.width < 2) {
        throw std::invalid_argument("seam_energy: grid needs at least two columns");
    }
    std::vector<bool> is_boundary(grid.width - 1, false);
    for (int c : boundary_cols) {
        if (c < 0 || c > grid.width - 2) {
            throw std::invalid_argument("seam_energy: boundary column " + std::to_string(c) +
                                        " outside [0, " + std::to_string(grid.width - 2) + "]");
        }
        is_boundary[c] = true;
    }

    double boundary_sum = 0.0, other_sum = 0.0;
    long boundary_n = 0, other_n = 0;
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c + 1 < grid.width; ++c) {
            double d = std::abs(grid.at(r, c + 1) - grid.at(r, c));
            if (is_boundary[c]) {
                boundary_sum += d;
                ++boundary_n;
            } else {
                other_sum += d;
                ++other_n;
            }
        }
    }
    if (other_n == 0) {
        throw std::invalid_argument("seam_energy: no non-boundary columns left for the baseline");
    }
    return boundary_sum / boundary_n - other_sum / other_n;
}

std::pair<Grid, Grid> ensemble_moments(std::span<const Grid> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("ensemble_moments: needs at least two samples");
    }
    const Grid& first = samples[0];
    for (const Grid& g : samples) require_same_shape(first, g, "ensemble_moments");

    const double n = static_cast<double>(samples.size());
    Grid mean(first.height, first.width);
    Grid variance(first.height, first.width);
    for (const Grid& g : samples) {
        for (std::size_t i = 0; i < mean.size(); ++i) mean.values[i] += g.values[i];
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean.values[i] /= n;
    for (const Grid& g : samples) {
        for (std::size_t i = 0; i < mean.size(); ++i) {
            double d = g.values[i] - mean.values[i];
            variance.values[i] += d * d;
        }
    }
    for (std::size_t i = 0; i < variance.size(); ++i) variance.values[i] /= (n - 1.0);
    return {std::move(mean), std::move(variance)};
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample set");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;

std::vector<double> ssim_kernel() {
    std::vector<double> k(kSsimWindow * kSsimWindow);
    const int half = kSsimWindow / 2;
    double total = 0.0;
    for (int r = 0; r < kSsimWindow; ++r) {
        for (int c = 0; c < kSsimWindow; ++c) {
            double dr = r - half, dc = c - half;
            double v = std::exp(-(dr * dr + dc * dc) / (2.0 * kSsimSigma * kSsimSigma));
            k[r * kSsimWindow + c] = v;
            total += v;
        }
    }
    for (double& v : k) v /= total;
    return k;
}

}  // namespace

double ssim(const Grid& a, const Grid& b) {
    require_same_shape(a, b, "ssim");
    if (a.height < kSsimWindow || a.width < kSsimWindow) {
        throw std::invalid_argument("ssim: grids must be at least " +
                                    std::to_string(kSsimWindow) + "x" +
                                    std::to_string(kSsimWindow));
    }

    double lo = a.values[0], hi = a.values[0];
    for (double v : a.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : b.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    if (range == 0.0) return 1.0;  // both constant and equal
    const double c1 = (kSsimK1 * range) * (kSsimK1 * range);
    const double c2 = (kSsimK2 * range) * (kSsimK2 * range);

    static const std::vector<double> kernel = ssim_kernel();
    double total = 0.0;
    long windows = 0;
    for (int r0 = 0; r0 + kSsimWindow <= a.height; ++r0) {
        for (int c0 = 0; c0 + kSsimWindow <= a.width; ++c0) {
            double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int r = 0; r < kSsimWindow; ++r) {
                for (int c = 0; c < kSsimWindow; ++c) {
                    double w = kernel[r * kSsimWindow + c];
                    double va = a.at(r0 + r, c0 + c);
                    double vb = b.at(r0 + r, c0 + c);
                    mu_a += w * va;
                    mu_b += w * vb;
                    aa += w * va * va;
                    bb += w * vb * vb;
                    ab += w * va * vb;
                }
            }
            double var_a = aa - mu_a * mu_a;
            double var_b = bb - mu_b * mu_b;
            double cov = ab - mu_a * mu_b;
            double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            ++windows;
        }
    }
    return total / windows;
}

}  // namespace tilediff
