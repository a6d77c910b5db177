#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hsd {

// Seeded FNV-1a over raw bytes with a splitmix64 finalizer. Used for the
// out-of-vocabulary embedding buckets, the baseline feature buckets, and the
// run-manifest file digests. Not cryptographic; reproducibility only.
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed);

// Streaming FNV-1a digest of a whole file, rendered as 16 hex digits.
// Throws DataError if the file cannot be read.
std::string file_digest_hex(const std::string& path);

}  // namespace hsd
