#pragma once

#include <string>
#include <vector>

#include "hsd/common.hpp"

namespace hsd {

struct ClassScore {
    Real precision;
    Real recall;
    Real f1;
};

// Per-class precision/recall/F1. A precision or recall whose denominator is
// zero counts as 0.
std::vector<ClassScore> per_class_scores(const std::vector<int>& gold,
                                         const std::vector<int>& pred, int num_classes);

// Unweighted mean of per-class F1. Classes with zero gold AND zero predicted
// occurrences are left out of the average entirely.
Real macro_f1(const std::vector<int>& gold, const std::vector<int>& pred, int num_classes);

struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<long>> counts;  // rows gold, columns predicted

    long total() const;
};

ConfusionMatrix confusion(const std::vector<int>& gold, const std::vector<int>& pred,
                          const std::vector<std::string>& labels);

void add_confusion(ConfusionMatrix& into, const ConfusionMatrix& from);

// Grid with a header row/column of label names.
void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path);

}  // namespace hsd
