#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsd/text.hpp"

namespace hsd {

struct TaskSpec {
    std::string name;
    std::vector<std::string> labels;  // ordered; index is the label id
    std::string path;

    int label_id(const std::string& label) const;
    int num_classes() const { return static_cast<int>(labels.size()); }
};

// Reads a `id,text,label` corpus, cleans and tokenizes every row. Posts whose
// text cleans down to zero tokens are dropped with a warning; they carry no
// signal the encoder can consume.
std::vector<CleanPost> load_task_csv(const std::string& path, const TaskSpec& spec,
                                     std::vector<std::string>* warnings = nullptr);

// Duplicates minority-class samples (uniform, with replacement) until every
// class matches the majority count. Originals all stay, in their input order;
// duplicates follow, grouped by class id ascending.
std::vector<CleanPost> oversample(const std::vector<CleanPost>& samples, int num_classes,
                                  std::uint64_t seed);

// Per-class split: each class contributes round(ratio * count) samples to the
// train side, clamped so both sides get at least one. Every class therefore
// needs two samples or more. Outputs keep the input order.
void stratified_split(const std::vector<CleanPost>& samples, int num_classes, double ratio,
                      std::uint64_t seed, std::vector<CleanPost>& train,
                      std::vector<CleanPost>& test);

}  // namespace hsd
