#include "hsd/rng.hpp"

#include <cmath>

#include "hsd/hashing.hpp"

namespace hsd {

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
    return splitmix64(root ^ hash_bytes(stream, 0x5eedULL));
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace hsd
