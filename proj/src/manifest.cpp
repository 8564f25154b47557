#include "accesswalk/manifest.hpp"

#include "accesswalk/text.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace accesswalk {

using nlohmann::json;
namespace fs = std::filesystem;

json walk_config_json(const WalkConfig& config)
{
    json j = {{"max_steps", config.max_steps},
              {"walks_per_source", config.walks_per_source},
              {"master_seed", config.master_seed}};
    if (config.sources) {
        json ids = json::array();
        for (NodeId s : *config.sources) ids.push_back(s);
        j["sources"] = std::move(ids);
    } else {
        j["sources"] = "all";
    }
    return j;
}

void write_manifest(const std::string& directory, const RunManifest& manifest)
{
    json inputs = json::array();
    for (const auto& path : manifest.inputs)
        inputs.push_back({{"path", path}, {"sha256", sha256_file(path)}});
    json outputs = json::array();
    for (const auto& name : manifest.outputs)
        outputs.push_back({{"path", name}, {"sha256", sha256_file((fs::path(directory) / name).string())}});

    json doc = {{"tool", "accesswalk"},
                {"version", ACCESSWALK_VERSION},
                {"command", manifest.command},
                {"inputs", std::move(inputs)},
                {"parameters", manifest.parameters},
                {"wall_seconds", manifest.wall_seconds},
                {"outputs", std::move(outputs)}};
    std::ofstream out(fs::path(directory) / kManifestName);
    if (!out) throw std::runtime_error("cannot write manifest in " + directory);
    out << doc.dump(2) << '\n';
}

std::optional<std::string> verify_manifest(const std::string& directory)
{
    std::ifstream in(fs::path(directory) / kManifestName);
    if (!in) return "no manifest in " + directory;
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) return "manifest is not valid JSON";
    for (const auto& rec : doc.value("inputs", json::array())) {
        const auto path = rec.at("path").get<std::string>();
        if (!fs::exists(path)) return "input missing: " + path;
        if (sha256_file(path) != rec.at("sha256").get<std::string>())
            return "input changed: " + path;
    }
    for (const auto& rec : doc.value("outputs", json::array())) {
        const auto path = (fs::path(directory) / rec.at("path").get<std::string>()).string();
        if (!fs::exists(path)) return "output missing: " + path;
        if (sha256_file(path) != rec.at("sha256").get<std::string>())
            return "output changed: " + path;
    }
    return std::nullopt;
}

}  // namespace accesswalk
