#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hsd/common.hpp"

namespace hsd {

// Pretrained token -> vector lookup. Immutable after load; concurrent reads
// need no synchronization.
struct EmbeddingTable {
    int dim = 0;
    std::unordered_map<std::string, Vec> entries;
    // Mean Euclidean norm of the stored vectors; out-of-vocabulary vectors
    // are rescaled to this norm. 1.0 for an empty table.
    Real mean_norm = Real(1);
};

// Deterministic character-level fallback for tokens missing from the table:
// the ngram_len-grams of "^token$" are hashed into dim buckets with +-1
// signs, averaged, and rescaled to mean_norm.
struct CharFallbackConfig {
    int ngram_len = 3;
    std::uint64_t seed = 0;
};

// Plain-text format, one entry per line: token then dim coefficients, space
// separated, no header. Duplicate tokens keep the first occurrence and are
// reported through *warnings. Throws DataError on I/O failure, dimension
// mismatch, or a non-numeric coefficient (with the line number).
EmbeddingTable load_embedding_file(const std::string& path,
                                   std::vector<std::string>* warnings = nullptr);

// Total: known tokens return the stored vector verbatim, unknown tokens the
// character-hash fallback. Equal (token, table, cfg) give bit-identical
// results.
Vec embed_token(const EmbeddingTable& table, const CharFallbackConfig& cfg,
                std::string_view token);

// Row i = embed_token(tokens[i]); empty input gives a 0 x dim matrix.
Mat embed_sequence(const EmbeddingTable& table, const CharFallbackConfig& cfg,
                   const std::vector<std::string>& tokens);

}  // namespace hsd
