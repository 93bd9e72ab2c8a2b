#pragma once

// Strict JSON run configuration. Physical parameters, the saturation law,
// eps/nu and the initial data are required; only numerical knobs have
// defaults. Every violation is collected before anything is reported.

#include <filesystem>
#include <string>
#include <vector>

#include "hmt/harness.hpp"

namespace hmt {

struct RunConfig {
    Scenario scenario;
    int cadence = 100;          ///< steps between snapshots
    std::string out_dir = "out";
    MMSSettings mms;
    LadderConfig ladder;
    std::vector<SweepAxis> sweep;
};

/// Throws ParseError (with the 1-based line) for malformed JSON and
/// ValidationError listing every offending field otherwise.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Smooth bump exp(1 - 1/(1 - r^2)) for |r| < 1, else 0; equals 1 at r = 0.
double bump_profile(double r);

}  // namespace hmt
