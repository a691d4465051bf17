#pragma once

#include <string>

#include "purejump/kernel.hpp"

namespace purejump::config {

inline constexpr const char* kSchemaName = "purejump.compensator";
inline constexpr int kSchemaVersion = 1;

/// Parse a compensator document. Throws ParseError (syntax) or InvalidSpec (semantics).
CompensatorSpec parse_spec(const std::string& text);
CompensatorSpec load_spec_file(const std::string& path);
/// Canonical JSON; parse_spec(to_json(s)) reproduces s exactly.
std::string to_json(const CompensatorSpec& spec, int indent = 2);

}  // namespace purejump::config
