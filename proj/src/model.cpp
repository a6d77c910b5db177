#include "hsd/model.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "hsd/rng.hpp"

namespace hsd {
namespace {

LstmDirParams make_dir(int input_dim, int hidden) {
    LstmDirParams p;
    for (int k = 0; k < 4; ++k) {
        p.w_in[k] = Mat::Zero(hidden, input_dim);
        p.w_rec[k] = Mat::Zero(hidden, hidden);
        p.bias[k] = Vec::Zero(hidden);
    }
    return p;
}

void fill_uniform(Mat& m, Rng& rng, Real bound) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            m(r, c) = rng.uniform(-bound, bound);
        }
    }
}

}  // namespace

int ModelParams::head_index(const std::string& task) const {
    for (std::size_t i = 0; i < heads.size(); ++i) {
        if (heads[i].task == task) return static_cast<int>(i);
    }
    throw ConfigError("unknown task: " + task);
}

ModelParams init_model(int embed_dim, int hidden, const std::vector<TaskDef>& tasks,
                       std::uint64_t seed) {
    if (embed_dim <= 0 || hidden <= 0) throw ConfigError("model dimensions must be positive");
    if (tasks.empty()) throw ConfigError("at least one task required");

    ModelParams m;
    m.embed_dim = embed_dim;
    m.hidden = hidden;
    m.layers.push_back({make_dir(embed_dim, hidden), make_dir(embed_dim, hidden)});
    m.layers.push_back({make_dir(2 * hidden, hidden), make_dir(2 * hidden, hidden)});
    for (const auto& t : tasks) {
        if (t.labels.size() < 2) throw ConfigError("task " + t.name + " needs at least 2 labels");
        TaskHead h;
        h.task = t.name;
        h.labels = t.labels;
        h.w = Mat::Zero(static_cast<Eigen::Index>(t.labels.size()), hidden);
        h.b = Vec::Zero(static_cast<Eigen::Index>(t.labels.size()));
        m.heads.push_back(std::move(h));
    }

    Rng rng(derive_seed(seed, "model-init"));
    const Real bound = Real(1) / std::sqrt(static_cast<Real>(hidden));
    for (auto& layer : m.layers) {
        for (LstmDirParams* dir : {&layer.fwd, &layer.bwd}) {
            for (int k = 0; k < 4; ++k) {
                fill_uniform(dir->w_in[k], rng, bound);
                fill_uniform(dir->w_rec[k], rng, bound);
                dir->bias[k] = k == 1 ? Vec::Ones(hidden) : Vec::Zero(hidden);
            }
        }
    }
    for (auto& head : m.heads) fill_uniform(head.w, rng, bound);
    return m;
}

ModelParams zeros_like(const ModelParams& m) {
    ModelParams z = m;
    visit_tensors(z, [](auto& t) { t.setZero(); });
    return z;
}

std::vector<Span> collect_spans(ModelParams& m) {
    std::vector<Span> spans;
    visit_tensors(m, [&spans](auto& t) {
        spans.push_back({t.data(), static_cast<std::size_t>(t.size())});
    });
    return spans;
}

std::size_t scalar_count(const ModelParams& m) {
    std::size_t n = 0;
    visit_tensors(const_cast<ModelParams&>(m), [&n](auto& t) {
        n += static_cast<std::size_t>(t.size());
    });
    return n;
}

void max_pool_with_provenance(const Mat& h_fwd, const Mat& h_bwd, Vec& pooled,
                              std::vector<PoolWinner>& winners) {
    const Eigen::Index tokens = h_fwd.rows();
    const Eigen::Index hidden = h_fwd.cols();
    pooled.resize(hidden);
    winners.assign(static_cast<std::size_t>(hidden), PoolWinner{0, Direction::kForward});
    for (Eigen::Index j = 0; j < hidden; ++j) {
        Real best = h_fwd(0, j);
        PoolWinner win{0, Direction::kForward};
        for (Eigen::Index t = 0; t < tokens; ++t) {
            if (h_fwd(t, j) > best) {
                best = h_fwd(t, j);
                win = {static_cast<int>(t), Direction::kForward};
            }
            if (h_bwd(t, j) > best) {
                best = h_bwd(t, j);
                win = {static_cast<int>(t), Direction::kBackward};
            }
        }
        pooled[j] = best;
        winners[static_cast<std::size_t>(j)] = win;
    }
}

EncodeTrace bilstm_encode(const ModelParams& m, const Mat& embedded) {
    if (embedded.rows() == 0) throw DataError("cannot encode an empty token sequence");
    if (embedded.cols() != m.embed_dim) {
        throw DataError("embedding width does not match the model");
    }
    const Eigen::Index tokens = embedded.rows();
    const int hidden = m.hidden;

    EncodeTrace tr;
    tr.l1f = lstm_scan(m.layers[0].fwd, embedded);
    tr.l1b = lstm_scan(m.layers[0].bwd, embedded.colwise().reverse());

    tr.input2.resize(tokens, 2 * hidden);
    tr.input2.leftCols(hidden) = tr.l1f.h;
    tr.input2.rightCols(hidden) = tr.l1b.h.colwise().reverse();

    tr.l2f = lstm_scan(m.layers[1].fwd, tr.input2);
    tr.l2b = lstm_scan(m.layers[1].bwd, tr.input2.colwise().reverse());

    const Mat h2b_seq = tr.l2b.h.colwise().reverse();
    max_pool_with_provenance(tr.l2f.h, h2b_seq, tr.pooled, tr.winners);
    return tr;
}

Vec head_forward(const TaskHead& head, const Vec& pooled) {
    return head.w * pooled + head.b;
}

Vec softmax(const Vec& logits) {
    const Real mx = logits.maxCoeff();
    Vec e = (logits.array() - mx).exp().matrix();
    return e / e.sum();
}

Real cross_entropy(const Vec& logits, int gold) {
    const Real mx = logits.maxCoeff();
    const Real lse = mx + std::log((logits.array() - mx).exp().sum());
    return lse - logits[gold];
}

namespace {

Real sample_gradient(const ModelParams& m, const TrainSample& s, ModelParams& g) {
    const EncodeTrace tr = bilstm_encode(m, *s.embedded);
    const TaskHead& head = m.heads[static_cast<std::size_t>(s.head)];
    const Vec logits = head_forward(head, tr.pooled);
    const Real loss = cross_entropy(logits, s.label);

    Vec dlogits = softmax(logits);
    dlogits[s.label] -= Real(1);

    TaskHead& gh = g.heads[static_cast<std::size_t>(s.head)];
    gh.w.noalias() += dlogits * tr.pooled.transpose();
    gh.b += dlogits;
    const Vec dpool = head.w.transpose() * dlogits;

    // Pooling routes each dimension's gradient to the single winning
    // activation; backward-direction rows live in processing order.
    const Eigen::Index tokens = s.embedded->rows();
    Mat d_h2f = Mat::Zero(tokens, m.hidden);
    Mat d_h2b = Mat::Zero(tokens, m.hidden);
    for (int j = 0; j < m.hidden; ++j) {
        const PoolWinner& win = tr.winners[static_cast<std::size_t>(j)];
        if (win.dir == Direction::kForward) {
            d_h2f(win.token, j) += dpool[j];
        } else {
            d_h2b(tokens - 1 - win.token, j) += dpool[j];
        }
    }

    Mat d_in2 = lstm_scan_backward(m.layers[1].fwd, tr.l2f, d_h2f, g.layers[1].fwd);
    const Mat d_in2_rev = lstm_scan_backward(m.layers[1].bwd, tr.l2b, d_h2b, g.layers[1].bwd);
    d_in2 += d_in2_rev.colwise().reverse();

    const Mat d_h1f = d_in2.leftCols(m.hidden);
    const Mat d_h1b = d_in2.rightCols(m.hidden).colwise().reverse();
    lstm_scan_backward(m.layers[0].fwd, tr.l1f, d_h1f, g.layers[0].fwd);
    lstm_scan_backward(m.layers[0].bwd, tr.l1b, d_h1b, g.layers[0].bwd);
    // Word vectors stay frozen, so the gradient on the embedded inputs stops here.
    return loss;
}

void add_into(std::vector<Span>& dst, std::vector<Span>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) {
        Eigen::Map<Vec>(dst[i].data, static_cast<Eigen::Index>(dst[i].size)) +=
            Eigen::Map<const Vec>(src[i].data, static_cast<Eigen::Index>(src[i].size));
    }
}

}  // namespace

Real model_gradients(const ModelParams& m, const std::vector<TrainSample>& batch,
                     ModelParams& grads, int threads) {
    if (batch.empty()) throw DataError("empty batch");
    const std::size_t n = batch.size();
    Real loss_sum = 0;

    if (threads <= 1) {
        // Same reduction shape as the threaded path (fresh per-sample tensor,
        // one committing add per sample) so results match it bit for bit.
        std::vector<Span> total = collect_spans(grads);
        ModelParams local = zeros_like(m);
        std::vector<Span> local_spans = collect_spans(local);
        for (const auto& s : batch) {
            visit_tensors(local, [](auto& t) { t.setZero(); });
            loss_sum += sample_gradient(m, s, local);
            add_into(total, local_spans);
        }
    } else {
        // Each worker computes one sample at a time, then commits it strictly
        // in sample order, so the floating-point reduction never depends on
        // scheduling or on the thread count.
        std::vector<Span> total = collect_spans(grads);
        std::atomic<std::size_t> next_claim{0};
        std::mutex mu;
        std::condition_variable cv;
        std::size_t next_commit = 0;
        std::exception_ptr failure;

        auto worker = [&]() {
            ModelParams local = zeros_like(m);
            std::vector<Span> local_spans = collect_spans(local);
            while (true) {
                const std::size_t s = next_claim.fetch_add(1);
                if (s >= n) return;
                Real loss = 0;
                std::exception_ptr err;
                try {
                    visit_tensors(local, [](auto& t) { t.setZero(); });
                    loss = sample_gradient(m, batch[s], local);
                } catch (...) {
                    err = std::current_exception();
                }
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return failure || next_commit == s; });
                if (failure) return;
                if (err) {
                    failure = err;
                    cv.notify_all();
                    return;
                }
                add_into(total, local_spans);
                loss_sum += loss;
                ++next_commit;
                cv.notify_all();
            }
        };

        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(n));
        pool.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    const Real scale = Real(1) / static_cast<Real>(n);
    visit_tensors(grads, [scale](auto& t) { t *= scale; });
    return loss_sum * scale;
}

Prediction predict(const ModelParams& m, int head, const Mat& embedded) {
    const EncodeTrace tr = bilstm_encode(m, embedded);
    const Vec logits = head_forward(m.heads[static_cast<std::size_t>(head)], tr.pooled);
    Prediction out;
    out.probs = softmax(logits);
    out.label = 0;
    for (Eigen::Index k = 1; k < out.probs.size(); ++k) {
        if (out.probs[k] > out.probs[out.label]) out.label = static_cast<int>(k);
    }
    return out;
}

}  // namespace hsd
