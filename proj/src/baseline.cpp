#include "hsd/baseline.hpp"

#include <algorithm>
#include <map>

#include "hsd/adam.hpp"
#include "hsd/hashing.hpp"
#include "hsd/model.hpp"
#include "hsd/rng.hpp"

namespace hsd {
namespace {

constexpr std::uint64_t kFeatureSeed = 0x6261736531364c52ull;

std::string lowercase_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

Vec class_logits(const BaselineModel& model, const SparseFeature& features) {
    Vec logits = model.b;
    for (const auto& [bucket, value] : features) {
        logits += model.w.col(bucket) * value;
    }
    return logits;
}

}  // namespace

std::string baseline_text(const CleanPost& post) {
    std::string text;
    for (std::size_t i = 0; i < post.tokens.size(); ++i) {
        if (i) text.push_back(' ');
        text += post.tokens[i];
    }
    return text;
}

SparseFeature char_ngram_features(const std::string& cleaned_text, int buckets) {
    const std::string text = lowercase_ascii(cleaned_text);
    std::map<int, int> counts;
    long total = 0;
    for (int n = 1; n <= 4; ++n) {
        if (text.size() < static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= text.size(); ++i) {
            const auto h = hash_bytes(std::string_view(text).substr(i, static_cast<std::size_t>(n)),
                                      kFeatureSeed);
            ++counts[static_cast<int>(h % static_cast<std::uint64_t>(buckets))];
            ++total;
        }
    }
    SparseFeature features;
    features.reserve(counts.size());
    for (const auto& [bucket, count] : counts) {
        features.emplace_back(bucket, static_cast<Real>(count) / static_cast<Real>(total));
    }
    return features;
}

BaselineModel train_baseline(const std::vector<CleanPost>& train, int num_classes,
                             std::uint64_t seed, const BaselineHyper& hyper) {
    if (train.empty()) throw DataError("baseline needs a non-empty training set");

    std::vector<SparseFeature> features;
    features.reserve(train.size());
    for (const auto& post : train) {
        features.push_back(char_ngram_features(baseline_text(post)));
    }

    BaselineModel model;
    model.w = Mat::Zero(num_classes, kBaselineBuckets);
    model.b = Vec::Zero(num_classes);
    Mat grad_w = Mat::Zero(num_classes, kBaselineBuckets);
    Vec grad_b = Vec::Zero(num_classes);

    const std::vector<Span> params{{model.w.data(), static_cast<std::size_t>(model.w.size())},
                                   {model.b.data(), static_cast<std::size_t>(model.b.size())}};
    const std::vector<Span> grads{{grad_w.data(), static_cast<std::size_t>(grad_w.size())},
                                  {grad_b.data(), static_cast<std::size_t>(grad_b.size())}};
    AdamState opt(static_cast<std::size_t>(model.w.size() + model.b.size()));
    AdamHyper adam;
    adam.lr = hyper.lr;

    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
        Rng rng(derive_seed(seed, "baseline-epoch-" + std::to_string(epoch)));
        rng.shuffle(order);
        for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(hyper.batch_size)) {
            const std::size_t end =
                std::min(at + static_cast<std::size_t>(hyper.batch_size), order.size());
            grad_w.setZero();
            grad_b.setZero();
            for (std::size_t k = at; k < end; ++k) {
                const std::size_t i = order[k];
                const Vec logits = class_logits(model, features[i]);
                Vec dlogits = softmax(logits);
                dlogits[train[i].label_id] -= Real(1);
                for (const auto& [bucket, value] : features[i]) {
                    grad_w.col(bucket) += dlogits * value;
                }
                grad_b += dlogits;
            }
            const Real scale = Real(1) / static_cast<Real>(end - at);
            grad_w *= scale;
            grad_b *= scale;
            adam_update(opt, adam, params, grads);
        }
    }
    return model;
}

int baseline_predict(const BaselineModel& model, const SparseFeature& features) {
    const Vec logits = class_logits(model, features);
    int best = 0;
    for (Eigen::Index k = 1; k < logits.size(); ++k) {
        if (logits[k] > logits[best]) best = static_cast<int>(k);
    }
    return best;
}

}  // namespace hsd
