#include "hsd/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hsd {
namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(const std::string& origin, std::size_t line, const std::string& key,
               const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        fail(origin, line, "cannot parse value `" + value + "` for " + key);
    }
    return out;
}

bool valid_task_name(const std::string& name) {
    if (name.empty()) return false;
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string> split_labels(const std::string& origin, std::size_t line,
                                      const std::string& value) {
    std::vector<std::string> labels;
    std::string current;
    std::stringstream ss(value);
    while (std::getline(ss, current, ',')) labels.push_back(trim(current));
    if (!value.empty() && value.back() == ',') labels.push_back("");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) fail(origin, line, "empty label name");
        if (!seen.insert(l).second) fail(origin, line, "duplicate label `" + l + "`");
    }
    return labels;
}

std::string format_real(Real v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(v));
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

const char* mode_name(TrainMode mode) {
    return mode == TrainMode::kSingleTask ? "single-task" : "transfer";
}

TrainConfig parse_config_text(const std::string& text, const std::string& origin) {
    TrainConfig cfg;
    struct TaskDraft {
        std::string path;
        std::vector<std::string> labels;
        bool has_path = false, has_labels = false;
    };
    std::map<std::string, TaskDraft> drafts;
    std::set<std::string> seen_keys;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (!seen_keys.insert(key).second) fail(origin, line_no, "duplicate key `" + key + "`");

        if (key == "hidden_size") {
            cfg.hidden_size = parse_number<int>(origin, line_no, key, value);
        } else if (key == "batch_size") {
            cfg.batch_size = parse_number<int>(origin, line_no, key, value);
        } else if (key == "epochs") {
            cfg.epochs = parse_number<int>(origin, line_no, key, value);
        } else if (key == "lr") {
            cfg.lr = static_cast<Real>(parse_number<double>(origin, line_no, key, value));
        } else if (key == "weight_decay") {
            cfg.weight_decay = static_cast<Real>(parse_number<double>(origin, line_no, key, value));
        } else if (key == "eval_every") {
            cfg.eval_every = parse_number<int>(origin, line_no, key, value);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(origin, line_no, key, value);
        } else if (key == "mode") {
            if (value == "single-task") {
                cfg.mode = TrainMode::kSingleTask;
            } else if (value == "transfer") {
                cfg.mode = TrainMode::kTransfer;
            } else {
                fail(origin, line_no, "mode must be single-task or transfer, got `" + value + "`");
            }
        } else if (key.rfind("task.", 0) == 0) {
            const std::size_t dot = key.rfind('.');
            const std::string name = key.substr(5, dot - 5);
            const std::string field = dot > 5 ? key.substr(dot + 1) : "";
            if (!valid_task_name(name)) {
                fail(origin, line_no, "task name must match [A-Za-z0-9_-]+ in `" + key + "`");
            }
            if (field == "path") {
                if (value.empty()) fail(origin, line_no, "empty path");
                drafts[name].path = value;
                drafts[name].has_path = true;
            } else if (field == "labels") {
                drafts[name].labels = split_labels(origin, line_no, value);
                drafts[name].has_labels = true;
            } else {
                fail(origin, line_no, "unknown task field `" + field + "` in `" + key + "`");
            }
        } else {
            fail(origin, line_no, "unknown key `" + key + "`");
        }
    }

    if (drafts.empty()) throw ConfigError(origin + ": no tasks declared");
    for (auto& [name, draft] : drafts) {
        if (!draft.has_path) throw ConfigError(origin + ": task." + name + ".path missing");
        if (!draft.has_labels) throw ConfigError(origin + ": task." + name + ".labels missing");
        if (draft.labels.size() < 2) {
            throw ConfigError(origin + ": task." + name + " needs at least 2 labels");
        }
        cfg.tasks.push_back({name, std::move(draft.labels), std::move(draft.path)});
    }

    if (cfg.hidden_size <= 0) throw ConfigError(origin + ": hidden_size must be positive");
    if (cfg.batch_size <= 0) throw ConfigError(origin + ": batch_size must be positive");
    if (cfg.epochs <= 0) throw ConfigError(origin + ": epochs must be positive");
    if (cfg.eval_every <= 0) throw ConfigError(origin + ": eval_every must be positive");
    if (!(cfg.lr > 0)) throw ConfigError(origin + ": lr must be positive");
    if (!(cfg.weight_decay >= 0)) throw ConfigError(origin + ": weight_decay must be nonnegative");
    if (cfg.epochs % cfg.eval_every != 0) {
        throw ConfigError(origin + ": eval_every must divide epochs");
    }
    if (cfg.mode == TrainMode::kSingleTask && cfg.tasks.size() != 1) {
        throw ConfigError(origin + ": single-task mode takes exactly one task, got " +
                          std::to_string(cfg.tasks.size()));
    }
    return cfg;
}

TrainConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string config_to_text(const TrainConfig& cfg) {
    std::ostringstream out;
    out << "batch_size = " << cfg.batch_size << "\n";
    out << "epochs = " << cfg.epochs << "\n";
    out << "eval_every = " << cfg.eval_every << "\n";
    out << "hidden_size = " << cfg.hidden_size << "\n";
    out << "lr = " << format_real(cfg.lr) << "\n";
    out << "mode = " << mode_name(cfg.mode) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "weight_decay = " << format_real(cfg.weight_decay) << "\n";
    for (const auto& task : cfg.tasks) {
        out << "task." << task.name << ".labels = ";
        for (std::size_t i = 0; i < task.labels.size(); ++i) {
            if (i) out << ",";
            out << task.labels[i];
        }
        out << "\n";
        out << "task." << task.name << ".path = " << task.path << "\n";
    }
    return out.str();
}

}  // namespace hsd
