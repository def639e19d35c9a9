#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace hdc {

/// Deterministic pseudorandom stream. The same seed yields the same sequence
/// on every platform: the mt19937_64 engine output is fully specified by the
/// standard and no std distributions are used (they are not portable).
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();

    /// Single random bit, drawn from an internal 64-bit buffer.
    bool next_bit();

    /// Unbiased uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform(std::uint64_t bound);

    /// Independent stream derived from (seed, index). Derivation uses the
    /// stored seed, not the current state, so children do not depend on how
    /// much of the parent stream was consumed.
    RandomSource child(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

/// Splitmix64-style mixing of (seed, index) into a new seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Folds a path of indices into a root seed. Used to give every run, fold,
/// and sample its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

/// Fisher-Yates shuffle of 0..count-1 driven by rng.
std::vector<std::uint32_t> shuffled_indices(std::uint32_t count, RandomSource& rng);

} // namespace hdc
