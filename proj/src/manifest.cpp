#include "hsd/manifest.hpp"

#include <fstream>

#include "json.hpp"

#include "hsd/common.hpp"

namespace hsd {

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json doc;
    doc["engine_version"] = manifest.engine_version;
    doc["command"] = manifest.command;
    doc["seed"] = manifest.seed;
    doc["config"] = manifest.config_text;
    doc["inputs"] = manifest.input_digests;
    doc["artifacts"] = manifest.artifact_paths;
    return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << manifest_to_json(manifest);
}

}  // namespace hsd
