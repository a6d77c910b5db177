#pragma once

#include <string>
#include <vector>

#include "hsd/adam.hpp"
#include "hsd/config.hpp"
#include "hsd/dataset.hpp"
#include "hsd/embedding.hpp"
#include "hsd/model.hpp"

namespace hsd {

struct TaskData {
    TaskSpec spec;
    std::vector<CleanPost> train;
    std::vector<CleanPost> test;
};

struct HistoryPoint {
    int epoch;
    std::vector<Real> task_f1;  // config task order
    Real mean_loss;             // per-sample mean training loss over the epoch
};

struct TrainHistory {
    std::vector<std::string> tasks;
    std::vector<HistoryPoint> points;
};

struct TrainResult {
    ModelParams best;
    CharFallbackConfig fallback;
    TrainHistory history;
    Real best_score = 0;  // mean validation macro-F1 across tasks
    int best_epoch = 0;
};

// Full training loop: per-task oversampling of the train side, mixed batches
// each epoch, one optimizer step per batch, validation every eval_every
// epochs. Returns the parameters from the best-scoring evaluation point
// (earliest epoch wins ties). Everything is seeded from cfg.seed.
TrainResult train(const TrainConfig& cfg, const EmbeddingTable& table,
                  const std::vector<TaskData>& tasks, int threads = 1);

// Gold/pred label ids for one task's sample list under a frozen model.
void evaluate_task(const ModelParams& model, int head, const EmbeddingTable& table,
                   const CharFallbackConfig& fallback, const std::vector<CleanPost>& samples,
                   std::vector<int>& gold, std::vector<int>& pred);

// `epoch,task,macro_f1,loss` rows; the loss column repeats the epoch's mean
// training loss on every task row of that evaluation point.
void write_history_csv(const TrainHistory& history, const std::string& path);

struct GridCell {
    int hidden_size;
    int batch_size;
    Real macro_f1;  // best mean validation macro-F1 of that cell's run
};

// Trains the full Cartesian product of hidden and batch sizes, same seed per
// cell, and scores each cell by its best validation point.
std::vector<GridCell> grid_search(const TrainConfig& base, const std::vector<int>& hidden_sizes,
                                  const std::vector<int>& batch_sizes,
                                  const EmbeddingTable& table, const std::vector<TaskData>& tasks,
                                  int threads = 1);

void write_grid_csv(const std::vector<GridCell>& cells, const std::string& path);

std::string format_real_shortest(Real v);

}  // namespace hsd
