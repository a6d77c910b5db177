#include "hsd/batching.hpp"

#include "hsd/rng.hpp"

namespace hsd {

std::vector<std::vector<BatchItem>> mixed_batches(const std::vector<std::size_t>& task_sizes,
                                                  int batch_size, std::uint64_t seed) {
    if (batch_size <= 0) throw ConfigError("batch size must be positive");
    std::vector<BatchItem> items;
    for (std::size_t t = 0; t < task_sizes.size(); ++t) {
        for (std::size_t i = 0; i < task_sizes[t]; ++i) {
            items.push_back({static_cast<int>(t), static_cast<int>(i)});
        }
    }
    if (items.empty()) throw DataError("no training samples to batch");

    Rng rng(seed);
    rng.shuffle(items);

    std::vector<std::vector<BatchItem>> batches;
    const auto step = static_cast<std::size_t>(batch_size);
    for (std::size_t at = 0; at < items.size(); at += step) {
        const std::size_t end = std::min(at + step, items.size());
        batches.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(at),
                             items.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return batches;
}

}  // namespace hsd
