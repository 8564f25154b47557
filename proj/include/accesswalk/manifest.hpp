#pragma once

#include "accesswalk/walk.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace accesswalk {

inline constexpr const char* kManifestName = "manifest.json";

/// Record of one CLI run, written as `manifest.json` in the output directory.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;   ///< paths; hashed on write
    std::vector<std::string> outputs;  ///< names relative to the output directory
    nlohmann::json parameters = nlohmann::json::object();
    double wall_seconds = 0.0;
};

nlohmann::json walk_config_json(const WalkConfig& config);

/// Hashes inputs and outputs and writes the manifest into `directory`.
void write_manifest(const std::string& directory, const RunManifest& manifest);

/// Rehashes every recorded file; returns the first mismatch description, or
/// nullopt when all hashes match.
std::optional<std::string> verify_manifest(const std::string& directory);

}  // namespace accesswalk
