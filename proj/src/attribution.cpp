#include "hsd/attribution.hpp"

#include <charconv>
#include <fstream>

namespace hsd {
namespace {

std::string escape_html(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string fixed3(Real v) {
    char buf[32];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, static_cast<double>(v), std::chars_format::fixed, 3);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::vector<Real> word_scores(const std::vector<PoolWinner>& winners, std::size_t tokens) {
    if (tokens == 0) throw DataError("no tokens to score");
    std::vector<long> counts(tokens, 0);
    for (const auto& win : winners) {
        if (win.token < 0 || static_cast<std::size_t>(win.token) >= tokens) {
            throw DataError("pool winner refers to a token outside the sentence");
        }
        ++counts[static_cast<std::size_t>(win.token)];
    }
    std::vector<Real> scores(tokens);
    const auto dims = static_cast<Real>(winners.size());
    for (std::size_t t = 0; t < tokens; ++t) {
        scores[t] = static_cast<Real>(counts[t]) / dims;
    }
    return scores;
}

std::string render_highlight_html(const HighlightReport& report) {
    if (report.tokens.size() != report.scores.size()) {
        throw DataError("one score per token required");
    }
    std::string html;
    html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    html += "<title>word contributions</title>\n<style>\n";
    html += "body { font-family: sans-serif; margin: 2rem; }\n";
    html += ".sentence span { padding: 0.15em 0.25em; border-radius: 0.2em; }\n";
    html += ".meta { color: #444; margin-top: 1rem; }\n";
    html += "</style>\n</head>\n<body>\n<p class=\"sentence\">";
    for (std::size_t t = 0; t < report.tokens.size(); ++t) {
        if (t) html += " ";
        html += "<span style=\"background: rgba(214,40,40,";
        html += fixed3(report.scores[t]);
        html += ")\">";
        html += escape_html(report.tokens[t]);
        html += "</span>";
    }
    html += "</p>\n<p class=\"meta\">task: " + escape_html(report.task);
    html += " | predicted: " + escape_html(report.predicted);
    html += " | gold: " + escape_html(report.gold);
    html += "</p>\n</body>\n</html>\n";
    return html;
}

void write_highlight_html(const HighlightReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write highlight: " + path);
    out << render_highlight_html(report);
}

}  // namespace hsd
