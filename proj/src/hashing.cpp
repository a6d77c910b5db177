#include "hsd/hashing.hpp"

#include <cstdio>
#include <fstream>

#include "hsd/common.hpp"
#include "hsd/rng.hpp"

namespace hsd {

namespace {
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}
}  // namespace

std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
    return splitmix64(fnv1a(bytes, kFnvOffset ^ seed));
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path);
    std::uint64_t h = kFnvOffset;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

}  // namespace hsd
