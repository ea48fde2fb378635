#include "tilediff/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tilediff/errors.hpp"
#include "tilediff/experiments.hpp"
#include "tilediff/image_io.hpp"
#include "tilediff/metrics.hpp"

namespace tilediff {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

json layout_json(const TileLayout& layout) {
    json patches = json::array();
    for (const Region& p : layout.patches()) {
        patches.push_back({p.row0, p.col0, p.height, p.width});
    }
    return patches;
}

json grid_stats(const Grid& g) {
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double v : g.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(g.size());
    return {{"mean", mean}, {"std", std::sqrt(var)}};
}

}  // namespace

int cmd_sample(const RunConfig& config, bool require_layout) {
    if (require_layout && (config.layout.window_h <= 0 || config.layout.stride_h <= 0)) {
        throw ConfigError("panorama: layout.window and layout.stride are required");
    }
    ResolvedRun run = resolve_config(config);
    fs::create_directories(config.output_dir);

    if (run.fusion.variance == VarianceMode::kCorrected &&
        run.sampler.method == SamplerMethod::kDdim) {
        std::cerr << "warning: variance correction has no effect with the deterministic DDIM "
                     "sampler (x == mu)\n";
    }

    json manifest;
    manifest["config"] = json::parse(config_to_json(config));
    manifest["patches"] = layout_json(run.layout);
    json images = json::array();

    auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed : config.seeds) {
        // style reference may be seed-dependent when no explicit ref seed is set
        RunConfig per_seed = config;
        per_seed.seeds = {seed};
        ResolvedRun seed_run = resolve_config(per_seed);

        json steps = json::array();
        StepObserver observer = [&steps](int t_next, const Grid& canvas) {
            json row = grid_stats(canvas);
            row["t"] = t_next;
            steps.push_back(row);
        };
        Grid canvas = sample_joint(*seed_run.denoiser, seed_run.sampler, seed_run.schedule,
                                   seed_run.layout, seed_run.guidance, seed_run.fusion,
                                   seed_run.style, seed, observer);
        require_finite(canvas, "cmd_sample output");

        std::string filename = "sample_seed" + std::to_string(seed) + ".pgm";
        fs::path path = fs::path(config.output_dir) / filename;
        PgmMapping mapping = write_pgm(path.string(), canvas);
        json entry = {{"seed", seed},
                      {"file", filename},
                      {"value_min", mapping.min},
                      {"value_max", mapping.max}};
        entry["final"] = grid_stats(canvas);
        entry["steps"] = std::move(steps);
        images.push_back(entry);
    }
    manifest["images"] = images;
    manifest["timing_seconds"] = elapsed_seconds(start);

    write_text(fs::path(config.output_dir) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << images.size() << " image(s) to " << config.output_dir << "\n";
    return 0;
}

int cmd_variance_test(const RunConfig& config) {
    if (config.trials < 1000) {
        std::cerr << "warning: trials=" << config.trials
                  << " is small; variance estimates will be noisy\n";
    }
    ResolvedRun run = resolve_config(config);
    fs::create_directories(config.output_dir);

    auto start = std::chrono::steady_clock::now();
    json report;
    report["config"] = json::parse(config_to_json(config));

    for (FusionStrategy strategy : {FusionStrategy::kMean, FusionStrategy::kGuided}) {
        StepVarianceResult step = single_step_variance_experiment(
            run.schedule, run.sampler.method, run.sampler.sigma_variant, strategy,
            std::max(config.trials, 2), config.seeds[0]);
        const char* key = strategy == FusionStrategy::kMean ? "mean" : "guided";
        report["single_step"][key] = {{"t", step.t},
                                      {"trials", step.trials},
                                      {"sigma2", step.sigma2},
                                      {"measured_plain", step.measured_plain},
                                      {"expected_plain", step.expected_plain},
                                      {"ratio_plain", step.ratio_plain},
                                      {"measured_corrected", step.measured_corrected},
                                      {"expected_corrected", step.expected_corrected},
                                      {"ratio_corrected", step.ratio_corrected}};
    }

    if (run.sampler.method == SamplerMethod::kDdpm && run.layout.patch_count() > 1) {
        int seeds = static_cast<int>(std::max<std::size_t>(config.seeds.size(), 2));
        ChainVarianceResult chain = chain_variance_experiment(
            run.schedule, run.sampler.sigma_variant, run.layout, run.guidance,
            run.fusion.strategy, std::max(seeds, 100), config.seeds[0]);
        report["full_chain"] = {{"seeds", chain.seeds},
                                {"max_coverage", chain.max_coverage},
                                {"overlap_variance_plain", chain.overlap_variance_plain},
                                {"single_variance_plain", chain.single_variance_plain},
                                {"ratio_plain", chain.ratio_plain},
                                {"overlap_variance_corrected", chain.overlap_variance_corrected},
                                {"single_variance_corrected", chain.single_variance_corrected},
                                {"ratio_corrected", chain.ratio_corrected}};
    }
    report["timing_seconds"] = elapsed_seconds(start);

    fs::path path = fs::path(config.output_dir) / "variance_report.json";
    write_text(path, report.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_seam_test(const RunConfig& config) {
    if (config.seeds.size() < 2) {
        throw ConfigError("seam-test: needs at least two seeds (paired comparison)");
    }
    ResolvedRun run = resolve_config(config);
    if (run.layout.patch_count() < 2) {
        throw ConfigError("seam-test: layout must contain overlapping patches");
    }
    fs::create_directories(config.output_dir);

    auto start = std::chrono::steady_clock::now();
    SeamTestResult result = seam_experiment(*run.denoiser, run.sampler, run.schedule, run.layout,
                                            run.guidance, config.seeds);

    json report;
    report["config"] = json::parse(config_to_json(config));
    json pairs = json::array();
    for (const SeamPair& p : result.pairs) {
        pairs.push_back({{"seed", p.seed}, {"md", p.md}, {"gf", p.gf}});
    }
    report["pairs"] = pairs;
    report["mean_md"] = result.mean_md;
    report["mean_gf"] = result.mean_gf;
    report["gf_wins"] = result.gf_wins;
    report["sign_test_p"] = result.sign_test_p;
    report["timing_seconds"] = elapsed_seconds(start);
    write_text(fs::path(config.output_dir) / "seam_report.json", report.dump(2) + "\n");

    std::ostringstream csv;
    csv << "seed,md,gf\n";
    for (const SeamPair& p : result.pairs) {
        csv << p.seed << "," << p.md << "," << p.gf << "\n";
    }
    write_text(fs::path(config.output_dir) / "seam_report.csv", csv.str());

    std::cout << "mean seam energy: md=" << result.mean_md << " gf=" << result.mean_gf
              << " (gf wins " << result.gf_wins << "/" << result.pairs.size()
              << ", sign test p=" << result.sign_test_p << ")\n";
    return 0;
}

int cmd_style_sweep(const RunConfig& config) {
    ResolvedRun run = resolve_config(config);
    if (run.layout.canvas_height() % run.layout.window_height() != 0 ||
        run.layout.canvas_width() % run.layout.window_width() != 0) {
        throw ConfigError("style-sweep: canvas dimensions must be divisible by the window");
    }
    fs::create_directories(config.output_dir);

    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(i / 10.0);
    int trials = std::min(std::max(config.trials, 1), 1000);

    auto start = std::chrono::steady_clock::now();
    StyleSweepResult sweep = style_sweep_experiment(
        run.layout.canvas_height(), run.layout.canvas_width(), run.layout.window_height(),
        run.layout.window_width(), alphas, trials, config.seeds[0],
        config.style.ref_seed.value_or(config.seeds[0]));

    json report;
    report["config"] = json::parse(config_to_json(config));
    report["trials"] = sweep.trials;
    json rows = json::array();
    for (std::size_t i = 0; i < sweep.alphas.size(); ++i) {
        rows.push_back({{"alpha", sweep.alphas[i]},
                        {"mean_pairwise_cosine", sweep.mean_cosine[i]},
                        {"mean_pairwise_angle", sweep.mean_angle[i]}});
    }
    report["sweep"] = rows;
    report["timing_seconds"] = elapsed_seconds(start);

    fs::path path = fs::path(config.output_dir) / "style_sweep.json";
    write_text(path, report.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int run_command(const std::string& name, const RunConfig& config) {
    try {
        if (name == "sample") return cmd_sample(config, false);
        if (name == "panorama") return cmd_sample(config, true);
        if (name == "variance-test") return cmd_variance_test(config);
        if (name == "seam-test") return cmd_seam_test(config);
        if (name == "style-sweep") return cmd_style_sweep(config);
        throw ConfigError("unknown command: " + name);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace tilediff
