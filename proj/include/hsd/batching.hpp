#pragma once

#include <cstdint>
#include <vector>

#include "hsd/common.hpp"

namespace hsd {

struct BatchItem {
    int task;
    int index;  // into that task's balanced train set
};

// One epoch's batches: a seeded shuffle of the concatenation of every task's
// balanced train set, chunked into batch_size groups (last one may be short).
// Each item keeps its task tag so the trainer can route it to the right head.
std::vector<std::vector<BatchItem>> mixed_batches(const std::vector<std::size_t>& task_sizes,
                                                  int batch_size, std::uint64_t seed);

}  // namespace hsd
