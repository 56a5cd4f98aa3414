#pragma once

#include <filesystem>
#include <string_view>

#include "vfdr/simulate.hpp"

namespace vfdr::config {

// Study configuration in TOML. Keys (all optional, unknown keys rejected):
//   m, fracAlt, muA, rho (number or array), reps, schemes (string or array),
//   method (string or array), alpha, cutoff, null-J, null-P, seed, dims,
//   mixedNullFrac, pvalueConvention, threads
// Problems are reported as InvalidConfig / UnsupportedScheme.
simulate::StudyConfig parse_study_config(std::string_view text, std::string_view source = "config");
simulate::StudyConfig load_study_config(const std::filesystem::path& path);

}  // namespace vfdr::config
