#pragma once

#include <string>

#include "cli/config.hpp"

namespace ssns::cli {

enum ExitCode : int { kPass = 0, kNumericFailure = 1, kConfigFailure = 2 };

struct Options {
    std::string out_dir = ".";
    bool verbose = false;
};

/// Each command writes <out_dir>/<command>.csv and returns an ExitCode.
int cmd_verify_lemmas(const RunConfig& config, const Options& options);
int cmd_estimate_c0(const RunConfig& config, const Options& options);
int cmd_picard(const RunConfig& config, const Options& options);
int cmd_direct(const RunConfig& config, const Options& options);
int cmd_pipeline(const RunConfig& config, const Options& options);

/// Full command line: subcommand plus --config, --out, --seed, --verbose.
int run_cli(int argc, char** argv);

}  // namespace ssns::cli
