#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hsd {

// Finalizer from splitmix64. Full avalanche on 64-bit inputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream seed from a root seed and a stream tag. Every random
// decision in a run derives from one root seed through these tags.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

// mt19937_64 engine (output sequence pinned by the standard) with hand-rolled
// distributions: std::uniform_*_distribution output is implementation-defined
// and would break cross-toolchain reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0,1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0,n), unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= lim) x = next_u64();
        return x % n;
    }

    // standard normal, Box-Muller
    double gaussian();

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hsd
