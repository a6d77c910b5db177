#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hsd/attribution.hpp"
#include "hsd/baseline.hpp"
#include "hsd/checkpoint.hpp"
#include "hsd/config.hpp"
#include "hsd/csv.hpp"
#include "hsd/dataset.hpp"
#include "hsd/experiment.hpp"
#include "hsd/hashing.hpp"
#include "hsd/manifest.hpp"
#include "hsd/map_render.hpp"
#include "hsd/metrics.hpp"
#include "hsd/rng.hpp"
#include "hsd/trainer.hpp"
#include "hsd/tsne.hpp"
#include "hsd/version.hpp"

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

hsd::EmbeddingTable load_table(const std::string& path) {
    std::vector<std::string> warnings;
    auto table = hsd::load_embedding_file(path, &warnings);
    print_warnings(warnings);
    return table;
}

std::vector<hsd::CleanPost> load_posts(const std::string& path, const hsd::TaskSpec& spec) {
    std::vector<std::string> warnings;
    auto posts = hsd::load_task_csv(path, spec, &warnings);
    print_warnings(warnings);
    return posts;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw hsd::DataError("cannot create output directory " + dir + ": " + ec.message());
}

// The head whose task table entry matches --task; a single-head checkpoint
// needs no flag.
int resolve_head(const hsd::ModelParams& model, std::string& task) {
    if (task.empty()) {
        if (model.heads.size() == 1) {
            task = model.heads[0].task;
            return 0;
        }
        std::string names;
        for (const auto& head : model.heads) names += " " + head.task;
        throw hsd::ConfigError("checkpoint has several tasks, pick one with --task:" + names);
    }
    for (std::size_t i = 0; i < model.heads.size(); ++i) {
        if (model.heads[i].task == task) return static_cast<int>(i);
    }
    std::string names;
    for (const auto& head : model.heads) names += " " + head.task;
    throw hsd::DataError("task `" + task + "` is not in the checkpoint's task table; it has:" +
                         names);
}

hsd::TaskSpec spec_from_head(const hsd::TaskHead& head, const std::string& path) {
    return {head.task, head.labels, path};
}

void cmd_preprocess(const std::string& input, const std::string& output) {
    std::ifstream in(input);
    if (!in) throw hsd::DataError("cannot open " + input);
    hsd::CsvReader reader(in);

    std::vector<std::string> fields;
    if (!reader.next(fields)) throw hsd::DataError(input + ": empty file");
    if (fields != std::vector<std::string>{"id", "text", "label"}) {
        throw hsd::DataError(input + ": expected header `id,text,label`");
    }

    std::ofstream out(output, std::ios::binary);
    if (!out) throw hsd::DataError("cannot write " + output);
    hsd::write_csv_row(out, {"id", "tokens", "label"});

    std::size_t rows = 0;
    while (reader.next(fields)) {
        if (fields.size() != 3) {
            throw hsd::DataError(input + ":" + std::to_string(reader.record_line()) +
                                 ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        const auto tokens = hsd::tokenize(hsd::clean_text(fields[1]));
        std::string joined;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) joined.push_back(' ');
            joined += tokens[i];
        }
        hsd::write_csv_row(out, {fields[0], joined, fields[2]});
        ++rows;
    }
    std::cout << "wrote " << rows << " rows to " << output << "\n";
}

std::vector<hsd::TaskData> load_and_split(const hsd::TrainConfig& cfg) {
    std::vector<hsd::TaskData> tasks;
    for (const auto& spec : cfg.tasks) {
        hsd::TaskData data;
        data.spec = spec;
        const auto posts = load_posts(spec.path, spec);
        hsd::stratified_split(posts, spec.num_classes(), 0.9, cfg.seed, data.train, data.test);
        tasks.push_back(std::move(data));
    }
    return tasks;
}

hsd::RunManifest base_manifest(const std::string& command, const hsd::TrainConfig& cfg,
                               const std::string& embeddings) {
    hsd::RunManifest manifest;
    manifest.engine_version = hsd::kEngineVersion;
    manifest.command = command;
    manifest.seed = cfg.seed;
    manifest.config_text = hsd::config_to_text(cfg);
    manifest.input_digests[embeddings] = hsd::file_digest_hex(embeddings);
    for (const auto& spec : cfg.tasks) {
        manifest.input_digests[spec.path] = hsd::file_digest_hex(spec.path);
    }
    return manifest;
}

void cmd_train(const std::string& config_path, const std::string& embeddings,
               const std::string& out_dir, int threads) {
    const hsd::TrainConfig cfg = hsd::parse_config_file(config_path);
    if (cfg.mode == hsd::TrainMode::kTransfer && cfg.tasks.size() == 1) {
        std::cerr << "warning: transfer mode with a single task behaves like single-task\n";
    }
    const auto table = load_table(embeddings);
    const auto tasks = load_and_split(cfg);

    ensure_dir(out_dir);
    hsd::RunManifest manifest = base_manifest("train", cfg, embeddings);
    manifest.artifact_paths["checkpoint"] = out_dir + "/checkpoint.bin";
    manifest.artifact_paths["history"] = out_dir + "/history.csv";
    manifest.artifact_paths["config"] = out_dir + "/config.txt";
    hsd::write_manifest(manifest, out_dir + "/manifest.json");
    {
        std::ofstream snapshot(out_dir + "/config.txt", std::ios::binary);
        if (!snapshot) throw hsd::DataError("cannot write " + out_dir + "/config.txt");
        snapshot << hsd::config_to_text(cfg);
    }

    const hsd::TrainResult result = hsd::train(cfg, table, tasks, threads);
    hsd::save_checkpoint(out_dir + "/checkpoint.bin", result.best, result.fallback);
    hsd::write_history_csv(result.history, out_dir + "/history.csv");

    std::cout << "best mean validation macro-F1 " << hsd::format_real_shortest(result.best_score)
              << " at epoch " << result.best_epoch << "\n";
    for (const auto& point : result.history.points) {
        if (point.epoch != result.best_epoch) continue;
        for (std::size_t t = 0; t < result.history.tasks.size(); ++t) {
            std::cout << "  " << result.history.tasks[t] << ": macro-F1 "
                      << hsd::format_real_shortest(point.task_f1[t]) << "\n";
        }
    }
}

void cmd_grid(const std::string& config_path, const std::string& embeddings,
              const std::string& out_dir, const std::vector<int>& hidden_sizes,
              const std::vector<int>& batch_sizes, int threads) {
    const hsd::TrainConfig cfg = hsd::parse_config_file(config_path);
    const auto table = load_table(embeddings);
    const auto tasks = load_and_split(cfg);

    const auto cells = hsd::grid_search(cfg, hidden_sizes, batch_sizes, table, tasks, threads);
    ensure_dir(out_dir);
    hsd::write_grid_csv(cells, out_dir + "/grid.csv");

    hsd::RunManifest manifest = base_manifest("grid", cfg, embeddings);
    manifest.artifact_paths["grid"] = out_dir + "/grid.csv";
    hsd::write_manifest(manifest, out_dir + "/manifest.json");

    const hsd::GridCell* best = &cells[0];
    for (const auto& cell : cells) {
        if (cell.macro_f1 > best->macro_f1) best = &cell;
    }
    std::cout << "grid: " << cells.size() << " cells, best hidden_size=" << best->hidden_size
              << " batch_size=" << best->batch_size << " macro-F1 "
              << hsd::format_real_shortest(best->macro_f1) << "\n";
}

void eval_checkpoint(const std::string& checkpoint, const std::string& embeddings,
                     std::string task, const std::string& data, const std::string& out_dir) {
    const hsd::Checkpoint ck = hsd::load_checkpoint(checkpoint);
    const auto table = load_table(embeddings);
    if (table.dim != ck.model.embed_dim) {
        throw hsd::DataError("embedding width " + std::to_string(table.dim) +
                             " does not match the checkpoint's " +
                             std::to_string(ck.model.embed_dim));
    }
    const int head = resolve_head(ck.model, task);
    const auto spec = spec_from_head(ck.model.heads[static_cast<std::size_t>(head)], data);
    const auto posts = load_posts(data, spec);
    if (posts.empty()) throw hsd::DataError(data + ": no usable posts");

    std::vector<int> gold, pred;
    hsd::evaluate_task(ck.model, head, table, ck.fallback, posts, gold, pred);
    const hsd::Real score = hsd::macro_f1(gold, pred, spec.num_classes());
    const auto per_class = hsd::per_class_scores(gold, pred, spec.num_classes());

    std::cout << "task " << task << ": macro-F1 " << hsd::format_real_shortest(score) << " over "
              << posts.size() << " posts\n";
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        std::cout << "  " << spec.labels[c] << ": P " << hsd::format_real_shortest(per_class[c].precision)
                  << " R " << hsd::format_real_shortest(per_class[c].recall) << " F1 "
                  << hsd::format_real_shortest(per_class[c].f1) << "\n";
    }

    if (out_dir.empty()) return;
    ensure_dir(out_dir);
    hsd::write_confusion_csv(hsd::confusion(gold, pred, spec.labels),
                             out_dir + "/confusion_" + task + ".csv");
    nlohmann::json per_class_json;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        per_class_json[spec.labels[c]] = {{"precision", static_cast<double>(per_class[c].precision)},
                                          {"recall", static_cast<double>(per_class[c].recall)},
                                          {"f1", static_cast<double>(per_class[c].f1)}};
    }
    const nlohmann::json doc = {{"task", task},
                                {"macro_f1", static_cast<double>(score)},
                                {"samples", posts.size()},
                                {"per_class", per_class_json}};
    std::ofstream report(out_dir + "/report.json", std::ios::binary);
    if (!report) throw hsd::DataError("cannot write " + out_dir + "/report.json");
    report << doc.dump(2) << "\n";
}

void eval_protocol(const std::string& config_path, const std::string& embeddings,
                   const std::string& out_dir, int repetitions, bool baseline, int threads) {
    const hsd::TrainConfig cfg = hsd::parse_config_file(config_path);
    const auto table = load_table(embeddings);

    std::vector<std::vector<hsd::CleanPost>> samples;
    for (const auto& spec : cfg.tasks) samples.push_back(load_posts(spec.path, spec));

    hsd::FitPredict fit;
    if (baseline) {
        fit = [&cfg](int, std::uint64_t seed, const std::vector<std::vector<hsd::CleanPost>>& train,
                     const std::vector<std::vector<hsd::CleanPost>>& test) {
            std::vector<std::vector<int>> preds;
            for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
                const auto& spec = cfg.tasks[t];
                const auto balanced = hsd::oversample(
                    train[t], spec.num_classes(), hsd::derive_seed(seed, "balance-" + spec.name));
                const auto model = hsd::train_baseline(balanced, spec.num_classes(),
                                                       hsd::derive_seed(seed, "fit-" + spec.name));
                std::vector<int> pred;
                pred.reserve(test[t].size());
                for (const auto& post : test[t]) {
                    pred.push_back(
                        hsd::baseline_predict(model, hsd::char_ngram_features(hsd::baseline_text(post))));
                }
                preds.push_back(std::move(pred));
            }
            return preds;
        };
    } else {
        fit = [&cfg, &table, threads](int, std::uint64_t seed,
                                      const std::vector<std::vector<hsd::CleanPost>>& train,
                                      const std::vector<std::vector<hsd::CleanPost>>& test) {
            hsd::TrainConfig run_cfg = cfg;
            run_cfg.seed = seed;
            std::vector<hsd::TaskData> tasks;
            for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
                tasks.push_back({cfg.tasks[t], train[t], test[t]});
            }
            const hsd::TrainResult result = hsd::train(run_cfg, table, tasks, threads);
            std::vector<std::vector<int>> preds;
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                std::vector<int> gold, pred;
                hsd::evaluate_task(result.best, static_cast<int>(t), table, result.fallback,
                                   test[t], gold, pred);
                preds.push_back(std::move(pred));
            }
            return preds;
        };
    }

    std::vector<hsd::TaskSpec> specs = cfg.tasks;
    const auto report = hsd::repeated_experiment(specs, samples, repetitions, fit);

    ensure_dir(out_dir);
    hsd::write_runs_csv(report, out_dir + "/runs.csv");
    hsd::write_summary_json(report, out_dir + "/summary.json");
    for (std::size_t t = 0; t < specs.size(); ++t) {
        hsd::write_confusion_csv(report.confusions[t],
                                 out_dir + "/confusion_" + specs[t].name + ".csv");
    }
    hsd::RunManifest manifest = base_manifest(baseline ? "eval-baseline" : "eval", cfg, embeddings);
    manifest.artifact_paths["runs"] = out_dir + "/runs.csv";
    manifest.artifact_paths["summary"] = out_dir + "/summary.json";
    hsd::write_manifest(manifest, out_dir + "/manifest.json");

    for (std::size_t t = 0; t < specs.size(); ++t) {
        std::cout << specs[t].name << ": macro-F1 " << hsd::format_real_shortest(report.mean[t])
                  << " +- " << hsd::format_real_shortest(report.stddev[t]) << " over "
                  << repetitions << " runs\n";
    }
}

void cmd_highlight(const std::string& checkpoint, const std::string& embeddings, std::string task,
                   const std::string& data, long row, const std::string& out_path) {
    const hsd::Checkpoint ck = hsd::load_checkpoint(checkpoint);
    const auto table = load_table(embeddings);
    if (table.dim != ck.model.embed_dim) {
        throw hsd::DataError("embedding width does not match the checkpoint");
    }
    const int head = resolve_head(ck.model, task);
    const auto& head_params = ck.model.heads[static_cast<std::size_t>(head)];
    const auto spec = spec_from_head(head_params, data);
    const auto posts = load_posts(data, spec);
    if (row < 0 || static_cast<std::size_t>(row) >= posts.size()) {
        throw hsd::DataError("--row " + std::to_string(row) + " out of range, file has " +
                             std::to_string(posts.size()) + " usable posts");
    }
    const hsd::CleanPost& post = posts[static_cast<std::size_t>(row)];

    const hsd::Mat x = hsd::embed_sequence(table, ck.fallback, post.tokens);
    const hsd::EncodeTrace trace = hsd::bilstm_encode(ck.model, x);
    const hsd::Vec logits = hsd::head_forward(head_params, trace.pooled);
    const hsd::Vec probs = hsd::softmax(logits);
    int predicted = 0;
    for (Eigen::Index k = 1; k < probs.size(); ++k) {
        if (probs[k] > probs[predicted]) predicted = static_cast<int>(k);
    }

    hsd::HighlightReport report;
    report.task = task;
    report.tokens = post.tokens;
    report.scores = hsd::word_scores(trace.winners, post.tokens.size());
    report.predicted = spec.labels[static_cast<std::size_t>(predicted)];
    report.gold = spec.labels[static_cast<std::size_t>(post.label_id)];
    hsd::write_highlight_html(report, out_path);
    std::cout << "post " << post.id << ": predicted " << report.predicted << ", gold "
              << report.gold << ", highlight written to " << out_path << "\n";
}

void cmd_map(const std::string& checkpoint, const std::string& embeddings,
             const std::vector<std::string>& tasks, const std::vector<std::string>& data_paths,
             const std::string& out_dir, double perplexity, int iterations, std::uint64_t seed) {
    if (tasks.size() != data_paths.size() || tasks.empty()) {
        throw hsd::ConfigError("--task and --data must be given the same number of times");
    }
    const hsd::Checkpoint ck = hsd::load_checkpoint(checkpoint);
    const auto table = load_table(embeddings);
    if (table.dim != ck.model.embed_dim) {
        throw hsd::DataError("embedding width does not match the checkpoint");
    }

    std::vector<hsd::MapPoint> points;
    std::vector<Eigen::VectorXd> pooled;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        std::string task = tasks[t];
        const int head = resolve_head(ck.model, task);
        const auto& head_params = ck.model.heads[static_cast<std::size_t>(head)];
        const auto spec = spec_from_head(head_params, data_paths[t]);
        for (const auto& post : load_posts(data_paths[t], spec)) {
            const hsd::Mat x = hsd::embed_sequence(table, ck.fallback, post.tokens);
            const hsd::EncodeTrace trace = hsd::bilstm_encode(ck.model, x);
            const hsd::Prediction prediction = hsd::predict(ck.model, head, x);
            hsd::MapPoint point;
            point.id = post.id;
            point.task = task;
            point.gold = spec.labels[static_cast<std::size_t>(post.label_id)];
            point.pred = spec.labels[static_cast<std::size_t>(prediction.label)];
            points.push_back(std::move(point));
            pooled.push_back(trace.pooled.cast<double>());
        }
    }
    if (pooled.empty()) throw hsd::DataError("no posts to map");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(pooled.size()), pooled[0].size());
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = pooled[i].transpose();
    }

    hsd::TsneOptions options;
    options.perplexity = perplexity;
    options.iterations = iterations;
    options.seed = seed;
    const hsd::TsneResult projection = hsd::tsne_project(x, options);
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i].x = projection.y(static_cast<Eigen::Index>(i), 0);
        points[i].y = projection.y(static_cast<Eigen::Index>(i), 1);
    }

    ensure_dir(out_dir);
    hsd::write_map_svg(points, out_dir + "/map.svg");
    hsd::write_coords_csv(points, out_dir + "/coords.csv");
    std::cout << "projected " << points.size() << " points, divergence "
              << hsd::format_real_shortest(static_cast<hsd::Real>(projection.kl.front()))
              << " -> "
              << hsd::format_real_shortest(static_cast<hsd::Real>(projection.kl.back()))
              << ", map written to " << out_dir << "/map.svg\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-task hate-speech text classification engine"};
    app.require_subcommand(1);

    std::string input, output, config_path, embeddings, out_dir, checkpoint, task, data;
    int threads = 1;
    int repetitions = 10;
    bool use_baseline = false;
    long row = 0;
    std::vector<int> hidden_sizes, batch_sizes;
    std::vector<std::string> map_tasks, map_data;
    double perplexity = 30;
    int iterations = 1000;
    std::uint64_t map_seed = 0;

    auto* preprocess = app.add_subcommand("preprocess", "Clean and tokenize a raw corpus");
    preprocess->add_option("--input", input, "raw CSV (id,text,label)")->required();
    preprocess->add_option("--output", output, "cleaned CSV (id,tokens,label)")->required();

    auto* train = app.add_subcommand("train", "Train a model from a config file");
    train->add_option("--config", config_path, "run configuration")->required();
    train->add_option("--embeddings", embeddings, "pretrained word vector file")->required();
    train->add_option("--out", out_dir, "output directory")->required();
    train->add_option("--threads", threads, "worker threads for batch gradients");

    auto* grid = app.add_subcommand("grid", "Grid-search hidden and batch sizes");
    grid->add_option("--config", config_path, "run configuration")->required();
    grid->add_option("--embeddings", embeddings, "pretrained word vector file")->required();
    grid->add_option("--out", out_dir, "output directory")->required();
    grid->add_option("--hidden", hidden_sizes, "hidden sizes to try")
        ->required()
        ->delimiter(',');
    grid->add_option("--batch", batch_sizes, "batch sizes to try")->required()->delimiter(',');
    grid->add_option("--threads", threads, "worker threads for batch gradients");

    auto* eval = app.add_subcommand(
        "eval", "Evaluate a checkpoint on a corpus, or run the repeated split protocol");
    eval->add_option("--checkpoint", checkpoint, "trained checkpoint (single-evaluation form)");
    eval->add_option("--task", task, "task to evaluate (with --checkpoint)");
    eval->add_option("--data", data, "corpus CSV (with --checkpoint)");
    eval->add_option("--config", config_path, "run configuration (protocol form)");
    eval->add_option("--embeddings", embeddings, "pretrained word vector file")->required();
    eval->add_option("--out", out_dir, "output directory");
    eval->add_option("--reps", repetitions, "protocol repetitions");
    eval->add_flag("--baseline", use_baseline, "run the character n-gram baseline instead");
    eval->add_option("--threads", threads, "worker threads for batch gradients");

    auto* highlight = app.add_subcommand("highlight", "Word-contribution HTML for one post");
    highlight->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
    highlight->add_option("--embeddings", embeddings, "pretrained word vector file")->required();
    highlight->add_option("--task", task, "task head to use");
    highlight->add_option("--data", data, "corpus CSV")->required();
    highlight->add_option("--row", row, "post index within the file (after dropping empties)");
    highlight->add_option("--out", output, "output HTML path")->required();

    auto* map = app.add_subcommand("map", "2D projection of pooled representations");
    map->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
    map->add_option("--embeddings", embeddings, "pretrained word vector file")->required();
    map->add_option("--task", map_tasks, "task name (repeat per corpus)")->required();
    map->add_option("--data", map_data, "corpus CSV (repeat per task)")->required();
    map->add_option("--out", out_dir, "output directory")->required();
    map->add_option("--perplexity", perplexity, "projection perplexity");
    map->add_option("--iterations", iterations, "projection iterations");
    map->add_option("--seed", map_seed, "projection seed");

    try {
        app.parse(argc, argv);

        if (preprocess->parsed()) {
            cmd_preprocess(input, output);
        } else if (train->parsed()) {
            cmd_train(config_path, embeddings, out_dir, threads);
        } else if (grid->parsed()) {
            cmd_grid(config_path, embeddings, out_dir, hidden_sizes, batch_sizes, threads);
        } else if (eval->parsed()) {
            const bool checkpoint_form = !checkpoint.empty();
            const bool protocol_form = !config_path.empty();
            if (checkpoint_form == protocol_form) {
                throw hsd::ConfigError(
                    "eval needs exactly one of --checkpoint (with --data) or --config");
            }
            if (checkpoint_form) {
                if (data.empty()) throw hsd::ConfigError("eval --checkpoint needs --data");
                eval_checkpoint(checkpoint, embeddings, task, data, out_dir);
            } else {
                if (out_dir.empty()) throw hsd::ConfigError("eval --config needs --out");
                if (repetitions < 1) throw hsd::ConfigError("--reps must be at least 1");
                eval_protocol(config_path, embeddings, out_dir, repetitions, use_baseline, threads);
            }
        } else if (highlight->parsed()) {
            cmd_highlight(checkpoint, embeddings, task, data, row, output);
        } else if (map->parsed()) {
            cmd_map(checkpoint, embeddings, map_tasks, map_data, out_dir, perplexity, iterations,
                    map_seed);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hsd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hsd::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const hsd::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
