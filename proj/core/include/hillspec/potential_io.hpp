#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hillspec/potential.hpp"

namespace hillspec {

// Step-potential text format:
//   {"period": 6.283185307179586, "breakpoints": [0, ..., period], "values": [...]}
// An optional "name" field overrides the default name.

PeriodicPotential parse_step_potential(std::string_view json_text,
                                       std::string default_name = "custom");

PeriodicPotential load_step_potential(const std::filesystem::path& path);

std::string to_json(const PeriodicPotential& step_potential);

/// Accepts a builtin name or a path to a step-potential file.
PeriodicPotential resolve_potential(const std::string& spec);

}  // namespace hillspec
