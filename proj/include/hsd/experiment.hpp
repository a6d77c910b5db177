#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hsd/dataset.hpp"
#include "hsd/metrics.hpp"

namespace hsd {

// Fits on the train sides and returns predicted label ids for every test
// sample, per task (same task order as the inputs). `seed` is the
// repetition's seed and must drive all of the fit's randomness.
using FitPredict = std::function<std::vector<std::vector<int>>(
    int run, std::uint64_t seed, const std::vector<std::vector<CleanPost>>& train,
    const std::vector<std::vector<CleanPost>>& test)>;

struct ExperimentReport {
    std::vector<std::string> tasks;
    std::vector<std::vector<Real>> run_scores;  // [run][task] macro-F1
    std::vector<Real> mean;                     // per task
    std::vector<Real> stddev;                   // population, per task
    std::vector<ConfusionMatrix> confusions;    // per task, summed over runs
};

// Monte-Carlo cross-validation: repetition r makes an independent seeded
// 90/10 stratified split of every task with seed r (0, 1, ...), fits, and
// scores macro-F1 on the held-out 10%.
ExperimentReport repeated_experiment(const std::vector<TaskSpec>& specs,
                                     const std::vector<std::vector<CleanPost>>& samples,
                                     int repetitions, const FitPredict& fit_predict);

// `run,task,macro_f1` rows.
void write_runs_csv(const ExperimentReport& report, const std::string& path);

// Mean/std per task plus the repetition count, as JSON.
void write_summary_json(const ExperimentReport& report, const std::string& path);

}  // namespace hsd
