#include "hsd/trainer.hpp"

#include <charconv>
#include <fstream>

#include "hsd/batching.hpp"
#include "hsd/csv.hpp"
#include "hsd/metrics.hpp"
#include "hsd/rng.hpp"

namespace hsd {

std::string format_real_shortest(Real v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(v));
    (void)ec;
    return std::string(buf, ptr);
}

void evaluate_task(const ModelParams& model, int head, const EmbeddingTable& table,
                   const CharFallbackConfig& fallback, const std::vector<CleanPost>& samples,
                   std::vector<int>& gold, std::vector<int>& pred) {
    gold.clear();
    pred.clear();
    for (const auto& post : samples) {
        const Mat x = embed_sequence(table, fallback, post.tokens);
        gold.push_back(post.label_id);
        pred.push_back(predict(model, head, x).label);
    }
}

TrainResult train(const TrainConfig& cfg, const EmbeddingTable& table,
                  const std::vector<TaskData>& tasks, int threads) {
    if (tasks.empty()) throw ConfigError("no tasks to train on");

    std::vector<TaskDef> defs;
    std::vector<std::vector<CleanPost>> balanced;
    for (const auto& task : tasks) {
        defs.push_back({task.spec.name, task.spec.labels});
        balanced.push_back(oversample(task.train, task.spec.num_classes(),
                                      derive_seed(cfg.seed, "balance-" + task.spec.name)));
    }

    ModelParams model = init_model(table.dim, cfg.hidden_size, defs, cfg.seed);
    const CharFallbackConfig fallback{3, derive_seed(cfg.seed, "oov")};

    AdamState opt(scalar_count(model));
    AdamHyper hyper;
    hyper.lr = cfg.lr;
    hyper.weight_decay = cfg.weight_decay;

    std::vector<Span> param_spans = collect_spans(model);
    ModelParams grads = zeros_like(model);
    std::vector<Span> grad_spans = collect_spans(grads);

    std::vector<std::size_t> sizes;
    for (const auto& set : balanced) sizes.push_back(set.size());

    TrainResult result;
    result.fallback = fallback;
    for (const auto& task : tasks) result.history.tasks.push_back(task.spec.name);

    Real best = -1;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto batches =
            mixed_batches(sizes, cfg.batch_size, derive_seed(cfg.seed, "epoch-" + std::to_string(epoch)));

        Real loss_sum = 0;
        std::size_t sample_count = 0;
        for (const auto& batch : batches) {
            std::vector<Mat> embedded;
            embedded.reserve(batch.size());
            std::vector<TrainSample> samples;
            samples.reserve(batch.size());
            for (const auto& item : batch) {
                const CleanPost& post =
                    balanced[static_cast<std::size_t>(item.task)][static_cast<std::size_t>(item.index)];
                embedded.push_back(embed_sequence(table, fallback, post.tokens));
                samples.push_back({&embedded.back(), post.label_id, item.task});
            }
            visit_tensors(grads, [](auto& t) { t.setZero(); });
            const Real loss = model_gradients(model, samples, grads, threads);
            adam_update(opt, hyper, param_spans, grad_spans);
            loss_sum += loss * static_cast<Real>(batch.size());
            sample_count += batch.size();
        }
        const Real mean_loss = loss_sum / static_cast<Real>(sample_count);
        if (!std::isfinite(mean_loss)) {
            throw NumericError("training loss became non-finite at epoch " + std::to_string(epoch));
        }

        if (epoch % cfg.eval_every != 0) continue;

        HistoryPoint point;
        point.epoch = epoch;
        point.mean_loss = mean_loss;
        Real f1_sum = 0;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            std::vector<int> gold, pred;
            evaluate_task(model, static_cast<int>(t), table, fallback, tasks[t].test, gold, pred);
            const Real f1 = macro_f1(gold, pred, tasks[t].spec.num_classes());
            point.task_f1.push_back(f1);
            f1_sum += f1;
        }
        result.history.points.push_back(point);

        const Real score = f1_sum / static_cast<Real>(tasks.size());
        if (score > best) {
            best = score;
            result.best = model;
            result.best_score = score;
            result.best_epoch = epoch;
        }
    }
    return result;
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write history: " + path);
    write_csv_row(out, {"epoch", "task", "macro_f1", "loss"});
    for (const auto& point : history.points) {
        for (std::size_t t = 0; t < history.tasks.size(); ++t) {
            write_csv_row(out, {std::to_string(point.epoch), history.tasks[t],
                                format_real_shortest(point.task_f1[t]),
                                format_real_shortest(point.mean_loss)});
        }
    }
}

std::vector<GridCell> grid_search(const TrainConfig& base, const std::vector<int>& hidden_sizes,
                                  const std::vector<int>& batch_sizes,
                                  const EmbeddingTable& table, const std::vector<TaskData>& tasks,
                                  int threads) {
    if (hidden_sizes.empty() || batch_sizes.empty()) {
        throw ConfigError("grid search needs at least one hidden size and one batch size");
    }
    std::vector<GridCell> cells;
    for (const int h : hidden_sizes) {
        for (const int b : batch_sizes) {
            TrainConfig cfg = base;
            cfg.hidden_size = h;
            cfg.batch_size = b;
            const TrainResult run = train(cfg, table, tasks, threads);
            cells.push_back({h, b, run.best_score});
        }
    }
    return cells;
}

void write_grid_csv(const std::vector<GridCell>& cells, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write grid results: " + path);
    write_csv_row(out, {"hidden_size", "batch_size", "macro_f1"});
    for (const auto& cell : cells) {
        write_csv_row(out, {std::to_string(cell.hidden_size), std::to_string(cell.batch_size),
                            format_real_shortest(cell.macro_f1)});
    }
}

}  // namespace hsd
