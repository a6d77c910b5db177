#pragma once

#include <string>
#include <vector>

#include "hsd/common.hpp"
#include "hsd/lstm.hpp"

namespace hsd {

struct BiLstmLayer {
    LstmDirParams fwd;
    LstmDirParams bwd;
};

struct TaskHead {
    std::string task;
    std::vector<std::string> labels;
    Mat w;  // labels × hidden
    Vec b;  // labels
};

// Shared encoder (two stacked bidirectional recurrent layers over frozen
// word vectors, max-pooled) plus one affine softmax head per task.
struct ModelParams {
    int embed_dim = 0;
    int hidden = 0;
    std::vector<BiLstmLayer> layers;
    std::vector<TaskHead> heads;

    int head_index(const std::string& task) const;
};

struct TaskDef {
    std::string name;
    std::vector<std::string> labels;
};

// All weights drawn uniformly from (-1/sqrt(hidden), 1/sqrt(hidden)) in
// visitation order; forget-gate biases start at 1, every other bias at 0.
ModelParams init_model(int embed_dim, int hidden, const std::vector<TaskDef>& tasks,
                       std::uint64_t seed);

ModelParams zeros_like(const ModelParams& m);

// Fixed tensor order shared by the checkpoint format, the flat parameter
// spans, and initialization: layers ascending, direction fwd then bwd, gate
// i/f/g/o, and w_in/w_rec/bias within a gate; then heads in stored order,
// w then b. Scalars within a tensor are column-major.
template <class F>
void visit_tensors(ModelParams& m, F&& f) {
    for (auto& layer : m.layers) {
        for (LstmDirParams* dir : {&layer.fwd, &layer.bwd}) {
            for (int k = 0; k < 4; ++k) {
                f(dir->w_in[k]);
                f(dir->w_rec[k]);
                f(dir->bias[k]);
            }
        }
    }
    for (auto& head : m.heads) {
        f(head.w);
        f(head.b);
    }
}

struct Span {
    Real* data;
    std::size_t size;
};

std::vector<Span> collect_spans(ModelParams& m);
std::size_t scalar_count(const ModelParams& m);

enum class Direction { kForward, kBackward };

// Which candidate won a pooled dimension: the token index (sequence order)
// and the scan direction its activation came from.
struct PoolWinner {
    int token;
    Direction dir;
};

struct EncodeTrace {
    LstmTrace l1f, l1b, l2f, l2b;     // backward-direction traces are in processing order
    Mat input2;                       // tokens × 2·hidden, sequence order
    Vec pooled;                       // hidden
    std::vector<PoolWinner> winners;  // one per pooled dimension
};

// Runs the full encoder over one embedded sequence (rows are tokens).
// The sequence must be non-empty.
EncodeTrace bilstm_encode(const ModelParams& m, const Mat& embedded);

// Per dimension, the maximum over all 2·tokens candidates (every token's
// forward and backward activation). Ties go to the lowest token index,
// forward before backward at the same token. Inputs are in sequence order.
void max_pool_with_provenance(const Mat& h_fwd, const Mat& h_bwd, Vec& pooled,
                              std::vector<PoolWinner>& winners);

Vec head_forward(const TaskHead& head, const Vec& pooled);
Vec softmax(const Vec& logits);
Real cross_entropy(const Vec& logits, int gold);

struct TrainSample {
    const Mat* embedded;
    int label;
    int head;
};

// Mean loss over the batch; gradients (also batch means) accumulate into
// `grads`, which must be zeroed by the caller. Reduction runs in sample
// order no matter how many worker threads are used, so results are
// reproducible bit for bit across thread counts.
Real model_gradients(const ModelParams& m, const std::vector<TrainSample>& batch,
                     ModelParams& grads, int threads = 1);

struct Prediction {
    int label;
    Vec probs;
};

Prediction predict(const ModelParams& m, int head, const Mat& embedded);

}  // namespace hsd
