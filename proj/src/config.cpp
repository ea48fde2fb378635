#include "tilediff/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tilediff/errors.hpp"
#include "tilediff/rng.hpp"

namespace tilediff {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError("config: unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config: field \"") + key + "\" has the wrong type");
        }
    }
}

void read_pair(const json& j, const char* key, int& first, int& second) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number_integer()) {
        first = second = v.get<int>();
    } else if (v.is_array() && v.size() == 2) {
        first = v[0].get<int>();
        second = v[1].get<int>();
    } else {
        throw ConfigError(std::string("config: field \"") + key +
                          "\" must be an integer or a [height, width] pair");
    }
}

}  // namespace

RunConfig load_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    reject_unknown_keys(j, {"schedule", "sampler", "prior", "layout", "fusion", "style", "seeds",
                            "seed", "trials", "output_dir"},
                        "top level");

    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        reject_unknown_keys(s, {"timesteps", "beta_start", "beta_end"}, "schedule");
        read_field(s, "timesteps", cfg.schedule.timesteps);
        read_field(s, "beta_start", cfg.schedule.beta_start);
        read_field(s, "beta_end", cfg.schedule.beta_end);
    }
    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        reject_unknown_keys(s, {"kind", "steps", "sigma"}, "sampler");
        read_field(s, "kind", cfg.sampler.kind);
        read_field(s, "steps", cfg.sampler.steps);
        read_field(s, "sigma", cfg.sampler.sigma);
    }
    if (j.contains("prior")) {
        const json& s = j["prior"];
        reject_unknown_keys(s, {"kind", "length_scale", "components"}, "prior");
        read_field(s, "kind", cfg.prior.kind);
        read_field(s, "length_scale", cfg.prior.length_scale);
        if (s.contains("components")) {
            cfg.prior.components.clear();
            for (const json& c : s.at("components")) {
                reject_unknown_keys(c, {"weight", "mean", "stddev"}, "prior.components");
                GmmComponent comp;
                read_field(c, "weight", comp.weight);
                read_field(c, "mean", comp.mean);
                read_field(c, "stddev", comp.stddev);
                cfg.prior.components.push_back(comp);
            }
        }
    }
    if (j.contains("layout")) {
        const json& s = j["layout"];
        reject_unknown_keys(s, {"canvas", "window", "stride"}, "layout");
        read_pair(s, "canvas", cfg.layout.canvas_h, cfg.layout.canvas_w);
        read_pair(s, "window", cfg.layout.window_h, cfg.layout.window_w);
        read_pair(s, "stride", cfg.layout.stride_h, cfg.layout.stride_w);
    }
    if (j.contains("fusion")) {
        const json& s = j["fusion"];
        reject_unknown_keys(s, {"strategy", "vcf", "floor"}, "fusion");
        read_field(s, "strategy", cfg.fusion.strategy);
        read_field(s, "vcf", cfg.fusion.vcf);
        read_field(s, "floor", cfg.fusion.floor);
    }
    if (j.contains("style")) {
        const json& s = j["style"];
        reject_unknown_keys(s, {"alpha", "ref_seed"}, "style");
        read_field(s, "alpha", cfg.style.alpha);
        if (s.contains("ref_seed") && !s.at("ref_seed").is_null()) {
            cfg.style.ref_seed = s.at("ref_seed").get<std::uint64_t>();
        }
    }
    if (j.contains("seed")) {
        cfg.seeds = {j.at("seed").get<std::uint64_t>()};
    }
    if (j.contains("seeds")) {
        cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    read_field(j, "trials", cfg.trials);
    read_field(j, "output_dir", cfg.output_dir);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_config_json(buffer.str());
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["schedule"] = {{"timesteps", cfg.schedule.timesteps},
                     {"beta_start", cfg.schedule.beta_start},
                     {"beta_end", cfg.schedule.beta_end}};
    j["sampler"] = {{"kind", cfg.sampler.kind},
                    {"steps", cfg.sampler.steps},
                    {"sigma", cfg.sampler.sigma}};
    json components = json::array();
    for (const auto& c : cfg.prior.components) {
        components.push_back({{"weight", c.weight}, {"mean", c.mean}, {"stddev", c.stddev}});
    }
    j["prior"] = {{"kind", cfg.prior.kind},
                  {"length_scale", cfg.prior.length_scale},
                  {"components", components}};
    j["layout"] = {{"canvas", {cfg.layout.canvas_h, cfg.layout.canvas_w}},
                   {"window", {cfg.layout.window_h, cfg.layout.window_w}},
                   {"stride", {cfg.layout.stride_h, cfg.layout.stride_w}}};
    j["fusion"] = {{"strategy", cfg.fusion.strategy},
                   {"vcf", cfg.fusion.vcf},
                   {"floor", cfg.fusion.floor}};
    j["style"] = {{"alpha", cfg.style.alpha}};
    if (cfg.style.ref_seed) {
        j["style"]["ref_seed"] = *cfg.style.ref_seed;
    } else {
        j["style"]["ref_seed"] = nullptr;
    }
    j["seeds"] = cfg.seeds;
    j["trials"] = cfg.trials;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

ResolvedRun resolve_config(const RunConfig& cfg) {
    ResolvedRun run;
    try {
        run.schedule = linear_schedule(cfg.schedule.timesteps, cfg.schedule.beta_start,
                                       cfg.schedule.beta_end);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("schedule: ") + e.what());
    }

    if (cfg.sampler.kind == "ddpm") {
        run.sampler.method = SamplerMethod::kDdpm;
    } else if (cfg.sampler.kind == "ddim") {
        run.sampler.method = SamplerMethod::kDdim;
    } else {
        throw ConfigError("sampler.kind must be \"ddpm\" or \"ddim\", got \"" +
                          cfg.sampler.kind + "\"");
    }
    if (cfg.sampler.sigma == "beta") {
        run.sampler.sigma_variant = SigmaVariant::kBeta;
    } else if (cfg.sampler.sigma == "tilde") {
        run.sampler.sigma_variant = SigmaVariant::kTildeBeta;
    } else {
        throw ConfigError("sampler.sigma must be \"beta\" or \"tilde\", got \"" +
                          cfg.sampler.sigma + "\"");
    }
    if (run.sampler.method == SamplerMethod::kDdim) {
        if (cfg.sampler.steps < 1 || cfg.sampler.steps > cfg.schedule.timesteps) {
            throw ConfigError("sampler.steps must lie in [1, schedule.timesteps]");
        }
        run.sampler.ddim_steps = cfg.sampler.steps;
    }

    LayoutParams lp = cfg.layout;
    if (lp.window_h <= 0 || lp.window_w <= 0) {
        lp.window_h = lp.canvas_h;
        lp.window_w = lp.canvas_w;
    }
    if (lp.stride_h <= 0 || lp.stride_w <= 0) {
        lp.stride_h = lp.window_h;
        lp.stride_w = lp.window_w;
    }
    run.layout = make_layout(lp.canvas_h, lp.canvas_w, lp.window_h, lp.window_w, lp.stride_h,
                             lp.stride_w);
    run.guidance = make_guidance_map(lp.window_h, lp.window_w, cfg.fusion.floor);

    if (cfg.prior.kind == "gp") {
        if (!(cfg.prior.length_scale > 0.0)) {
            throw ConfigError("prior.length_scale must be positive");
        }
        run.denoiser = std::make_unique<GpDenoiser>(
            GpPrior::squared_exponential(lp.window_h, lp.window_w, cfg.prior.length_scale));
    } else if (cfg.prior.kind == "gmm") {
        try {
            run.denoiser = std::make_unique<GmmDenoiser>(GmmPrior(cfg.prior.components));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("prior.components: ") + e.what());
        }
    } else if (cfg.prior.kind == "zero") {
        run.denoiser = std::make_unique<ZeroDenoiser>();
    } else {
        throw ConfigError("prior.kind must be \"gp\", \"gmm\" or \"zero\", got \"" +
                          cfg.prior.kind + "\"");
    }

    if (cfg.fusion.strategy == "md") {
        run.fusion.strategy = FusionStrategy::kMean;
    } else if (cfg.fusion.strategy == "gf") {
        run.fusion.strategy = FusionStrategy::kGuided;
    } else {
        throw ConfigError("fusion.strategy must be \"md\" or \"gf\", got \"" +
                          cfg.fusion.strategy + "\"");
    }
    run.fusion.variance = cfg.fusion.vcf ? VarianceMode::kCorrected : VarianceMode::kPlain;

    if (cfg.style.alpha < 0.0 || cfg.style.alpha > 1.0) {
        throw ConfigError("style.alpha must lie in [0, 1]");
    }
    if (cfg.style.alpha > 0.0) {
        if (lp.canvas_h % lp.window_h != 0 || lp.canvas_w % lp.window_w != 0) {
            throw ConfigError("style.alpha > 0 requires canvas dimensions divisible by the "
                              "window dimensions");
        }
        std::uint64_t ref_seed = cfg.style.ref_seed.value_or(cfg.seeds.empty() ? 0 : cfg.seeds[0]);
        RngStream ref_stream(ref_seed, NoisePurpose::kStyleRef, 0, 0);
        run.style = StyleAlignConfig{cfg.style.alpha,
                                     gaussian_grid(lp.window_h, lp.window_w, ref_stream)};
    }

    if (cfg.seeds.empty()) {
        throw ConfigError("seeds: at least one seed is required");
    }
    return run;
}

}  // namespace tilediff
