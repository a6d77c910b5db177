#include "hsd/metrics.hpp"

#include <fstream>

#include "hsd/csv.hpp"

namespace hsd {
namespace {

struct Tally {
    long tp = 0, fp = 0, fn = 0;
};

std::vector<Tally> tallies(const std::vector<int>& gold, const std::vector<int>& pred,
                           int num_classes) {
    if (gold.size() != pred.size()) throw DataError("gold/pred length mismatch");
    if (gold.empty()) throw DataError("cannot score an empty prediction set");
    std::vector<Tally> t(static_cast<std::size_t>(num_classes));
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] < 0 || gold[i] >= num_classes || pred[i] < 0 || pred[i] >= num_classes) {
            throw DataError("label id out of range");
        }
        if (gold[i] == pred[i]) {
            ++t[static_cast<std::size_t>(gold[i])].tp;
        } else {
            ++t[static_cast<std::size_t>(pred[i])].fp;
            ++t[static_cast<std::size_t>(gold[i])].fn;
        }
    }
    return t;
}

}  // namespace

std::vector<ClassScore> per_class_scores(const std::vector<int>& gold,
                                         const std::vector<int>& pred, int num_classes) {
    const auto t = tallies(gold, pred, num_classes);
    std::vector<ClassScore> scores;
    scores.reserve(t.size());
    for (const auto& c : t) {
        ClassScore s{};
        const long pd = c.tp + c.fp;
        const long gd = c.tp + c.fn;
        s.precision = pd > 0 ? static_cast<Real>(c.tp) / static_cast<Real>(pd) : Real(0);
        s.recall = gd > 0 ? static_cast<Real>(c.tp) / static_cast<Real>(gd) : Real(0);
        s.f1 = (s.precision + s.recall) > 0
                   ? 2 * s.precision * s.recall / (s.precision + s.recall)
                   : Real(0);
        scores.push_back(s);
    }
    return scores;
}

Real macro_f1(const std::vector<int>& gold, const std::vector<int>& pred, int num_classes) {
    const auto t = tallies(gold, pred, num_classes);
    const auto scores = per_class_scores(gold, pred, num_classes);
    Real sum = 0;
    int counted = 0;
    for (std::size_t c = 0; c < t.size(); ++c) {
        if (t[c].tp + t[c].fp + t[c].fn == 0) continue;  // never seen, never predicted
        sum += scores[c].f1;
        ++counted;
    }
    if (counted == 0) throw DataError("no scorable classes");
    return sum / static_cast<Real>(counted);
}

long ConfusionMatrix::total() const {
    long n = 0;
    for (const auto& row : counts) {
        for (const long c : row) n += c;
    }
    return n;
}

ConfusionMatrix confusion(const std::vector<int>& gold, const std::vector<int>& pred,
                          const std::vector<std::string>& labels) {
    if (gold.size() != pred.size()) throw DataError("gold/pred length mismatch");
    const int k = static_cast<int>(labels.size());
    ConfusionMatrix cm;
    cm.labels = labels;
    cm.counts.assign(static_cast<std::size_t>(k), std::vector<long>(static_cast<std::size_t>(k), 0));
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] < 0 || gold[i] >= k || pred[i] < 0 || pred[i] >= k) {
            throw DataError("label id out of range");
        }
        ++cm.counts[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(pred[i])];
    }
    return cm;
}

void add_confusion(ConfusionMatrix& into, const ConfusionMatrix& from) {
    if (into.labels.empty()) {
        into = from;
        return;
    }
    if (into.labels != from.labels) throw DataError("confusion matrices have different labels");
    for (std::size_t i = 0; i < into.counts.size(); ++i) {
        for (std::size_t j = 0; j < into.counts[i].size(); ++j) {
            into.counts[i][j] += from.counts[i][j];
        }
    }
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write confusion matrix: " + path);
    std::vector<std::string> header{"gold\\pred"};
    header.insert(header.end(), cm.labels.begin(), cm.labels.end());
    write_csv_row(out, header);
    for (std::size_t i = 0; i < cm.counts.size(); ++i) {
        std::vector<std::string> row{cm.labels[i]};
        for (const long c : cm.counts[i]) row.push_back(std::to_string(c));
        write_csv_row(out, row);
    }
}

}  // namespace hsd
