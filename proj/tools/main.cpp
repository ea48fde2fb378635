#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilediff/cli.hpp"
#include "tilediff/config.hpp"
#include "tilediff/errors.hpp"

namespace {

using tilediff::ConfigError;
using tilediff::RunConfig;

// "64" -> 64x64, "64x448" -> (64, 448)
void parse_shape(const std::string& text, int& h, int& w, const char* flag) {
    auto x = text.find('x');
    try {
        if (x == std::string::npos) {
            h = w = std::stoi(text);
        } else {
            h = std::stoi(text.substr(0, x));
            w = std::stoi(text.substr(x + 1));
        }
    } catch (const std::exception&) {
        throw ConfigError(std::string(flag) + ": expected N or HxW, got \"" + text + "\"");
    }
}

// "1..20" or "3,7,11"
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto dots = text.find("..");
    try {
        if (dots != std::string::npos) {
            std::uint64_t lo = std::stoull(text.substr(0, dots));
            std::uint64_t hi = std::stoull(text.substr(dots + 2));
            if (hi < lo) throw ConfigError("--seeds: range end before start");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            std::size_t pos = 0;
            while (pos < text.size()) {
                auto comma = text.find(',', pos);
                if (comma == std::string::npos) comma = text.size();
                seeds.push_back(std::stoull(text.substr(pos, comma - pos)));
                pos = comma + 1;
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("--seeds: expected LO..HI or a comma list, got \"" + text + "\"");
    }
    return seeds;
}

struct FlagOverrides {
    std::string config_path;
    std::string sampler, sigma, fusion, prior;
    std::optional<int> steps, schedule_T, trials;
    std::optional<double> beta_start, beta_end, length_scale, floor, sa_alpha;
    std::string canvas, window, stride;
    std::optional<std::uint64_t> seed, sa_ref_seed;
    std::string seeds;
    std::string out_dir;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--sampler", f.sampler, "ddpm | ddim")
        ->check(CLI::IsMember({"ddpm", "ddim"}));
    cmd->add_option("--steps", f.steps, "DDIM step count");
    cmd->add_option("--sigma", f.sigma, "DDPM sigma variant: beta | tilde")
        ->check(CLI::IsMember({"beta", "tilde"}));
    cmd->add_option("--fusion", f.fusion, "md | gf")->check(CLI::IsMember({"md", "gf"}));
    cmd->add_flag("--vcf", "enable variance-corrected fusion");
    cmd->add_option("--prior", f.prior, "gp | gmm | zero")
        ->check(CLI::IsMember({"gp", "gmm", "zero"}));
    cmd->add_option("--length-scale", f.length_scale, "GP kernel length scale (pixels)");
    cmd->add_option("--canvas", f.canvas, "canvas shape: N or HxW");
    cmd->add_option("--window", f.window, "window shape: N or HxW");
    cmd->add_option("--stride", f.stride, "stride: N or HxW");
    cmd->add_option("--floor", f.floor, "guidance weight floor");
    cmd->add_option("--schedule-T", f.schedule_T, "number of diffusion timesteps");
    cmd->add_option("--beta-start", f.beta_start, "first beta");
    cmd->add_option("--beta-end", f.beta_end, "last beta");
    cmd->add_option("--seed", f.seed, "single seed");
    cmd->add_option("--seeds", f.seeds, "seed list: LO..HI or comma separated");
    cmd->add_option("--sa-alpha", f.sa_alpha, "style alignment ratio (0 disables)");
    cmd->add_option("--sa-ref-seed", f.sa_ref_seed, "style reference noise seed");
    cmd->add_option("--trials", f.trials, "Monte-Carlo trial count");
    cmd->add_option("--out", f.out_dir, "output directory");
}

RunConfig build_config(const CLI::App* cmd, const FlagOverrides& f) {
    RunConfig cfg;
    if (!f.config_path.empty()) cfg = tilediff::load_config_file(f.config_path);

    if (!f.sampler.empty()) cfg.sampler.kind = f.sampler;
    if (f.steps) cfg.sampler.steps = *f.steps;
    if (!f.sigma.empty()) cfg.sampler.sigma = f.sigma;
    if (!f.fusion.empty()) cfg.fusion.strategy = f.fusion;
    if (cmd->count("--vcf") > 0) cfg.fusion.vcf = true;
    if (!f.prior.empty()) cfg.prior.kind = f.prior;
    if (f.length_scale) cfg.prior.length_scale = *f.length_scale;
    if (!f.canvas.empty()) parse_shape(f.canvas, cfg.layout.canvas_h, cfg.layout.canvas_w, "--canvas");
    if (!f.window.empty()) parse_shape(f.window, cfg.layout.window_h, cfg.layout.window_w, "--window");
    if (!f.stride.empty()) parse_shape(f.stride, cfg.layout.stride_h, cfg.layout.stride_w, "--stride");
    if (f.floor) cfg.fusion.floor = *f.floor;
    if (f.schedule_T) cfg.schedule.timesteps = *f.schedule_T;
    if (f.beta_start) cfg.schedule.beta_start = *f.beta_start;
    if (f.beta_end) cfg.schedule.beta_end = *f.beta_end;
    if (f.seed) cfg.seeds = {*f.seed};
    if (!f.seeds.empty()) cfg.seeds = parse_seed_list(f.seeds);
    if (f.sa_alpha) cfg.style.alpha = *f.sa_alpha;
    if (f.sa_ref_seed) cfg.style.ref_seed = *f.sa_ref_seed;
    if (f.trials) cfg.trials = *f.trials;
    if (!f.out_dir.empty()) cfg.output_dir = f.out_dir;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilediff: tiled joint-denoising sampler with guided and "
                 "variance-corrected fusion"};
    app.require_subcommand(1);

    FlagOverrides flags;
    CLI::App* sample = app.add_subcommand("sample", "generate images (single patch or tiled)");
    CLI::App* panorama =
        app.add_subcommand("panorama", "generate a tiled panorama (window/stride required)");
    CLI::App* variance =
        app.add_subcommand("variance-test", "single-step and full-chain variance experiments");
    CLI::App* seam = app.add_subcommand("seam-test", "paired-seed seam energy: md vs gf");
    CLI::App* style =
        app.add_subcommand("style-sweep", "style-alignment clustering over the alpha grid");
    for (CLI::App* cmd : {sample, panorama, variance, seam, style}) {
        add_common_flags(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        RunConfig cfg = build_config(cmd, flags);
        return tilediff::run_command(cmd->get_name(), cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tilediff::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
