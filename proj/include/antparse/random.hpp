#pragma once

/// Deterministic random numbers.
///
/// The standard distributions are implementation-defined, so results would
/// differ between standard libraries. The conversions here are fixed so a
/// seed reproduces the same colony run everywhere.

#include <cstdint>
#include <random>

namespace antparse {

/// splitmix64 finalizer, used to derive independent stream seeds.
[[nodiscard]] constexpr auto mix64(std::uint64_t x) noexcept -> std::uint64_t {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the stream owned by one ant in one iteration. Serial and
/// threaded schedules hand every ant the same stream.
[[nodiscard]] constexpr auto stream_seed(std::uint64_t seed, std::uint64_t iteration,
                                         std::uint64_t ant) noexcept -> std::uint64_t {
    return mix64(seed ^ mix64((iteration << 32) ^ ant ^ mix64(iteration)));
}

class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_ {seed} {}

    /// Uniform in [0, 1) with 53 bits of resolution.
    [[nodiscard]] auto uniform01() -> double {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, bound). bound must be positive.
    [[nodiscard]] auto below(std::uint64_t bound) -> std::uint64_t {
        // rejection sampling on the top of the range removes modulo bias
        const auto limit = std::uint64_t {0} - (std::uint64_t {0} - bound) % bound;
        while (true) {
            const auto x = engine_();
            if (limit == 0 || x < limit) {
                return x % bound;
            }
        }
    }

    [[nodiscard]] auto next_u64() -> std::uint64_t { return engine_(); }

   private:
    std::mt19937_64 engine_;
};

}  // namespace antparse
