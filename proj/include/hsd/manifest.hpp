#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hsd {

// What a run directory needs to be reproduced: the resolved config, content
// digests of every input file (taken before training), the root seed, and
// where the artifacts went. Deliberately no timestamps or host details, so
// reruns produce identical manifests.
struct RunManifest {
    std::string engine_version;
    std::string command;
    std::uint64_t seed = 0;
    std::string config_text;
    std::map<std::string, std::string> input_digests;   // path → fnv1a-64 hex
    std::map<std::string, std::string> artifact_paths;  // artifact name → path
};

std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace hsd
