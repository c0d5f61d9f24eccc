#pragma once

#include <cmath>
#include <cstdint>

namespace gn {

// 64-bit finalizer from splitmix64 (Vigna); bijective, good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Stateless counter-based word: two mixing rounds keyed by `key`.
// Distinct (key, counter) pairs give statistically independent words,
// and any word can be re-queried at any time.
constexpr std::uint64_t counter_word(std::uint64_t key, std::uint64_t counter) noexcept {
    return mix64(key ^ mix64(counter * kGolden + 0x6A09E667F3BCC909ull));
}

// Map a word to (0, 1]; never returns 0, so -log(u) is finite.
inline double to_unit_open(std::uint64_t w) noexcept {
    return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

// Exponential with the given rate from a single word.
inline double expo_from_word(std::uint64_t w, double rate) noexcept {
    return -std::log(to_unit_open(w)) / rate;
}

// Sequential stream over the counter space; one stream per trial.
class Stream {
  public:
    explicit Stream(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_u64() noexcept { return counter_word(key_, counter_++); }
    double next_unit() noexcept { return to_unit_open(next_u64()); }
    double next_expo(double rate) noexcept { return expo_from_word(next_u64(), rate); }

    std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Per-trial seed derivation: seed_i = mix64(master ^ (i+1)*golden).
// Fixed here and documented in the README; replaying trial i in isolation
// needs only (master_seed, i).
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
    return mix64(master_seed ^ ((trial_index + 1) * kGolden));
}

}  // namespace gn
