#include "hsd/embedding.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "hsd/hashing.hpp"

namespace hsd {

EmbeddingTable load_embedding_file(const std::string& path,
                                   std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);

    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    Real norm_sum = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::size_t pos = line.find(' ');
        if (pos == std::string::npos || pos == 0) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected `token v1 ... vd`");
        }
        const std::string token = line.substr(0, pos);

        std::vector<Real> coeffs;
        const char* p = line.data() + pos;
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && *p == ' ') ++p;
            if (p == end) break;
            double value = 0;
            const auto [next, ec] = std::from_chars(p, end, value);
            if (ec != std::errc() || (next < end && *next != ' ')) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": non-numeric coefficient");
            }
            coeffs.push_back(static_cast<Real>(value));
            p = next;
        }
        if (coeffs.empty()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": no coefficients");
        }
        if (table.dim == 0) {
            table.dim = static_cast<int>(coeffs.size());
        } else if (static_cast<int>(coeffs.size()) != table.dim) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": dimension mismatch, expected " + std::to_string(table.dim) +
                            " got " + std::to_string(coeffs.size()));
        }
        if (table.entries.count(token)) {
            if (warnings) {
                warnings->push_back(path + ":" + std::to_string(line_no) +
                                    ": duplicate token `" + token + "`, keeping first");
            }
            continue;
        }
        Vec v = Eigen::Map<const Vec>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
        norm_sum += v.norm();
        table.entries.emplace(token, std::move(v));
    }
    if (table.entries.empty()) throw DataError(path + ": empty embedding file");
    table.mean_norm = norm_sum / static_cast<Real>(table.entries.size());
    return table;
}

Vec embed_token(const EmbeddingTable& table, const CharFallbackConfig& cfg,
                std::string_view token) {
    if (const auto it = table.entries.find(std::string(token)); it != table.entries.end()) {
        return it->second;
    }
    const int d = table.dim > 0 ? table.dim : 1;
    Vec v = Vec::Zero(d);

    std::string padded;
    padded.reserve(token.size() + 2);
    padded.push_back('^');
    padded.append(token);
    padded.push_back('$');

    const std::size_t n = static_cast<std::size_t>(cfg.ngram_len);
    std::size_t grams = 0;
    const auto add_gram = [&](std::string_view g) {
        const std::uint64_t h = hash_bytes(g, cfg.seed);
        const auto bucket = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(d));
        v[bucket] += (h >> 63) ? Real(-1) : Real(1);
        ++grams;
    };
    if (padded.size() <= n) {
        add_gram(padded);
    } else {
        for (std::size_t i = 0; i + n <= padded.size(); ++i) {
            add_gram(std::string_view(padded).substr(i, n));
        }
    }
    v /= static_cast<Real>(grams);
    Real norm = v.norm();
    if (norm == Real(0)) {
        // all grams cancelled; fall back to a fixed unit direction
        v[0] = Real(1);
        norm = Real(1);
    }
    v *= table.mean_norm / norm;
    return v;
}

Mat embed_sequence(const EmbeddingTable& table, const CharFallbackConfig& cfg,
                   const std::vector<std::string>& tokens) {
    Mat x(static_cast<Eigen::Index>(tokens.size()), table.dim);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = embed_token(table, cfg, tokens[i]).transpose();
    }
    return x;
}

}  // namespace hsd
