#pragma once

#include <string>
#include <vector>

#include "hsd/common.hpp"
#include "hsd/model.hpp"

namespace hsd {

// score(t) = fraction of pooled dimensions whose winner is token t, counting
// both directions. Scores are nonnegative and sum to 1: the winners
// partition the pooled dimensions.
std::vector<Real> word_scores(const std::vector<PoolWinner>& winners, std::size_t tokens);

struct HighlightReport {
    std::string task;
    std::vector<std::string> tokens;
    std::vector<Real> scores;
    std::string predicted;
    std::string gold;
};

// Standalone HTML: one span per token, background opacity linear in the
// token's score; predicted and gold labels printed below the sentence.
std::string render_highlight_html(const HighlightReport& report);

void write_highlight_html(const HighlightReport& report, const std::string& path);

}  // namespace hsd
