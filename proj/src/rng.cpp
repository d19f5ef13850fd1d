#include "gvae/rng.hpp"

#include <cmath>
#include <sstream>

namespace gvae {

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t mask = ~std::uint64_t{0};
    std::uint64_t limit = n - 1;
    // Smallest all-ones mask covering n-1.
    while ((mask >> 1) >= limit) mask >>= 1;
    for (;;) {
        std::uint64_t v = next_u64() & mask;
        if (v < n) return v;
    }
}

double Rng::normal() {
    // uniform01 can return 0; shift into (0, 1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::string Rng::state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Rng::set_state(const std::string& text) {
    std::istringstream is(text);
    is >> engine_;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    // splitmix64 finalizer over the combined value.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace gvae
