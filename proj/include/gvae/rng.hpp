#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace gvae {

// Deterministic random stream. Wraps std::mt19937_64 (whose sequence is fixed
// by the standard) and derives all variates from raw 64-bit draws so that
// results do not depend on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling over a power-of-two mask.
    std::uint64_t uniform_int(std::uint64_t n);

    // Standard normal via Box-Muller (cosine branch only, so the stream
    // consumes exactly two draws per variate and carries no cached state).
    double normal();

    // Engine state as decimal text; round-trips exactly.
    std::string state() const;
    void set_state(const std::string& text);

    // Child seed for an independent stream (splitmix64 of seed and stream id).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id);

  private:
    std::mt19937_64 engine_;
};

}  // namespace gvae
