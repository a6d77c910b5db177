#include "hsd/experiment.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "hsd/csv.hpp"
#include "hsd/trainer.hpp"

namespace hsd {

ExperimentReport repeated_experiment(const std::vector<TaskSpec>& specs,
                                     const std::vector<std::vector<CleanPost>>& samples,
                                     int repetitions, const FitPredict& fit_predict) {
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (specs.size() != samples.size()) throw DataError("task spec/sample list mismatch");

    ExperimentReport report;
    for (const auto& spec : specs) report.tasks.push_back(spec.name);
    report.confusions.resize(specs.size());

    for (int run = 0; run < repetitions; ++run) {
        const auto seed = static_cast<std::uint64_t>(run);
        std::vector<std::vector<CleanPost>> train(specs.size()), test(specs.size());
        for (std::size_t t = 0; t < specs.size(); ++t) {
            stratified_split(samples[t], specs[t].num_classes(), 0.9, seed, train[t], test[t]);
        }

        const auto predictions = fit_predict(run, seed, train, test);
        if (predictions.size() != specs.size()) {
            throw DataError("fit returned predictions for the wrong number of tasks");
        }

        std::vector<Real> scores;
        for (std::size_t t = 0; t < specs.size(); ++t) {
            if (predictions[t].size() != test[t].size()) {
                throw DataError("fit returned the wrong number of predictions for task " +
                                specs[t].name);
            }
            std::vector<int> gold;
            gold.reserve(test[t].size());
            for (const auto& post : test[t]) gold.push_back(post.label_id);
            scores.push_back(macro_f1(gold, predictions[t], specs[t].num_classes()));
            add_confusion(report.confusions[t], confusion(gold, predictions[t], specs[t].labels));
        }
        report.run_scores.push_back(std::move(scores));
    }

    for (std::size_t t = 0; t < specs.size(); ++t) {
        Real sum = 0, sq = 0;
        for (const auto& run : report.run_scores) {
            sum += run[t];
            sq += run[t] * run[t];
        }
        const Real n = static_cast<Real>(repetitions);
        const Real mean = sum / n;
        report.mean.push_back(mean);
        report.stddev.push_back(std::sqrt(std::max(Real(0), sq / n - mean * mean)));
    }
    return report;
}

void write_runs_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write run scores: " + path);
    write_csv_row(out, {"run", "task", "macro_f1"});
    for (std::size_t run = 0; run < report.run_scores.size(); ++run) {
        for (std::size_t t = 0; t < report.tasks.size(); ++t) {
            write_csv_row(out, {std::to_string(run), report.tasks[t],
                                format_real_shortest(report.run_scores[run][t])});
        }
    }
}

void write_summary_json(const ExperimentReport& report, const std::string& path) {
    nlohmann::json tasks;
    for (std::size_t t = 0; t < report.tasks.size(); ++t) {
        tasks[report.tasks[t]] = {
            {"mean_macro_f1", static_cast<double>(report.mean[t])},
            {"std_macro_f1", static_cast<double>(report.stddev[t])},
        };
    }
    const nlohmann::json doc = {
        {"repetitions", report.run_scores.size()},
        {"tasks", tasks},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write summary: " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace hsd
