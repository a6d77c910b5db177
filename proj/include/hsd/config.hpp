#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsd/common.hpp"
#include "hsd/dataset.hpp"

namespace hsd {

enum class TrainMode { kSingleTask, kTransfer };

// Flat `key = value` run configuration. Recognized keys, exactly:
//   hidden_size, batch_size, epochs, lr, weight_decay, eval_every, seed,
//   mode (single-task | transfer), task.<name>.path, task.<name>.labels
// Lines starting with `#` and blank lines are ignored; anything else is a
// hard error. Tasks are kept sorted by name so downstream ordering never
// depends on file layout.
struct TrainConfig {
    int hidden_size = 64;
    int batch_size = 32;
    int epochs = 300;
    Real lr = Real(1e-3);
    Real weight_decay = Real(1e-3);
    int eval_every = 10;
    std::uint64_t seed = 0;
    TrainMode mode = TrainMode::kSingleTask;
    std::vector<TaskSpec> tasks;
};

TrainConfig parse_config_text(const std::string& text, const std::string& origin);
TrainConfig parse_config_file(const std::string& path);

// Canonical re-serialization (sorted keys, resolved defaults); what a run
// directory snapshots.
std::string config_to_text(const TrainConfig& cfg);

const char* mode_name(TrainMode mode);

}  // namespace hsd
