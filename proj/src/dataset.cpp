#include "hsd/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hsd/common.hpp"
#include "hsd/csv.hpp"
#include "hsd/rng.hpp"

namespace hsd {

int TaskSpec::label_id(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return static_cast<int>(i);
    }
    return -1;
}

std::vector<CleanPost> load_task_csv(const std::string& path, const TaskSpec& spec,
                                     std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset: " + path);
    CsvReader reader(in);

    std::vector<std::string> fields;
    if (!reader.next(fields)) throw DataError(path + ": empty file");
    if (fields != std::vector<std::string>{"id", "text", "label"}) {
        throw DataError(path + ": expected header `id,text,label`");
    }

    std::vector<CleanPost> posts;
    while (reader.next(fields)) {
        const std::size_t line = reader.record_line();
        if (fields.size() != 3) {
            throw DataError(path + ":" + std::to_string(line) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw DataError(path + ":" + std::to_string(line) + ": empty id");
        }
        const int label = spec.label_id(fields[2]);
        if (label < 0) {
            throw DataError(path + ":" + std::to_string(line) + ": label `" + fields[2] +
                            "` is not in the label set of task " + spec.name);
        }
        CleanPost post;
        post.id = fields[0];
        post.tokens = tokenize(clean_text(fields[1]));
        post.label_id = label;
        post.task = spec.name;
        if (post.tokens.empty()) {
            if (warnings) {
                warnings->push_back(path + ":" + std::to_string(line) + ": post `" + post.id +
                                    "` has no tokens after cleaning, dropped");
            }
            continue;
        }
        posts.push_back(std::move(post));
    }
    return posts;
}

std::vector<CleanPost> oversample(const std::vector<CleanPost>& samples, int num_classes,
                                  std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int c = samples[i].label_id;
        if (c < 0 || c >= num_classes) throw DataError("label id out of range");
        by_class[static_cast<std::size_t>(c)].push_back(i);
    }
    std::size_t majority = 0;
    for (int c = 0; c < num_classes; ++c) {
        if (by_class[static_cast<std::size_t>(c)].empty()) {
            throw DataError("class " + std::to_string(c) + " has no samples to oversample");
        }
        majority = std::max(majority, by_class[static_cast<std::size_t>(c)].size());
    }

    std::vector<CleanPost> out = samples;
    out.reserve(static_cast<std::size_t>(num_classes) * majority);
    Rng rng(derive_seed(seed, "oversample"));
    for (int c = 0; c < num_classes; ++c) {
        const auto& pool = by_class[static_cast<std::size_t>(c)];
        for (std::size_t k = pool.size(); k < majority; ++k) {
            out.push_back(samples[pool[rng.below(pool.size())]]);
        }
    }
    return out;
}

void stratified_split(const std::vector<CleanPost>& samples, int num_classes, double ratio,
                      std::uint64_t seed, std::vector<CleanPost>& train,
                      std::vector<CleanPost>& test) {
    if (ratio <= 0 || ratio >= 1) throw ConfigError("split ratio must lie strictly in (0,1)");
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int c = samples[i].label_id;
        if (c < 0 || c >= num_classes) throw DataError("label id out of range");
        by_class[static_cast<std::size_t>(c)].push_back(i);
    }

    std::vector<char> to_train(samples.size(), 0);
    Rng rng(derive_seed(seed, "split"));
    for (int c = 0; c < num_classes; ++c) {
        auto& pool = by_class[static_cast<std::size_t>(c)];
        if (pool.size() < 2) {
            throw DataError("class " + std::to_string(c) +
                            " has fewer than 2 samples, cannot appear on both sides of a split");
        }
        const auto n = static_cast<long>(pool.size());
        long take = std::lround(ratio * static_cast<double>(n));
        take = std::clamp(take, 1L, n - 1);
        rng.shuffle(pool);
        for (long k = 0; k < take; ++k) to_train[pool[static_cast<std::size_t>(k)]] = 1;
    }

    train.clear();
    test.clear();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (to_train[i] ? train : test).push_back(samples[i]);
    }
}

}  // namespace hsd
