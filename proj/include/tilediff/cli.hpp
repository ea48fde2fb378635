#pragma once

#include <string>

#include "tilediff/config.hpp"

namespace tilediff {

// Subcommand bodies shared by the binary and the in-process tests. Each
// writes its outputs under config.output_dir and returns 0 on success;
// configuration and numerical failures are thrown (ConfigError /
// NumericError) and mapped to exit codes by the caller.
int cmd_sample(const RunConfig& config, bool require_layout);
int cmd_variance_test(const RunConfig& config);
int cmd_seam_test(const RunConfig& config);
int cmd_style_sweep(const RunConfig& config);

// Exit-code mapping used by main(): 0 ok, 2 config error, 3 numeric error.
int run_command(const std::string& name, const RunConfig& config);

}  // namespace tilediff
