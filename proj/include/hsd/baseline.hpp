#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hsd/common.hpp"
#include "hsd/text.hpp"

namespace hsd {

// Character n-gram logistic regression over hashed byte n-grams (n = 1..4)
// of the lowercased, cleaned text, with counts L1-normalized per sample.
// Hashing makes unseen n-grams fall into shared buckets, so there is no
// explicit out-of-vocabulary path.
constexpr int kBaselineBuckets = 1 << 18;

using SparseFeature = std::vector<std::pair<int, Real>>;  // (bucket, weight), bucket ascending

SparseFeature char_ngram_features(const std::string& cleaned_text, int buckets = kBaselineBuckets);

struct BaselineModel {
    Mat w;  // classes × buckets
    Vec b;
};

struct BaselineHyper {
    int epochs = 40;
    int batch_size = 32;
    Real lr = Real(0.1);
};

BaselineModel train_baseline(const std::vector<CleanPost>& train, int num_classes,
                             std::uint64_t seed, const BaselineHyper& hyper = {});

int baseline_predict(const BaselineModel& model, const SparseFeature& features);

// Joined token text as the feature extractor consumes it.
std::string baseline_text(const CleanPost& post);

}  // namespace hsd
