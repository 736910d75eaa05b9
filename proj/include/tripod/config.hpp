#pragma once

#include <string>

#include "tripod/protocol.hpp"

namespace tripod {

/// Parses the JSON sequence-config document (schema_version 1). Strict:
/// unknown keys are rejected with the path to the offending key; physical
/// inconsistencies raise semantic ConfigErrors. All frequencies in the
/// document are cyclic MHz, times us, powers uW.
RunConfig parse_config(const std::string& text);

/// Canonical on-disk encoding; parse(serialize(parse(text))) is identical
/// to parse(text).
std::string serialize_config(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

} // namespace tripod
