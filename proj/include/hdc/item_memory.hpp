#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdc/hypervector.hpp"
#include "hdc/random.hpp"

namespace hdc {

enum class MappingKind {
    orthogonal,
    linear,
    local_linear,
    concatenation,
};

std::string to_string(MappingKind kind);

/// Indexed store of atomic hypervectors, one per level, produced by one of
/// the mapping strategies below. Immutable once built.
class ItemMemory {
public:
    ItemMemory(MappingKind kind, std::uint32_t splits, std::vector<Hypervector> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    std::uint32_t dim() const noexcept { return entries_.front().dim(); }
    MappingKind kind() const noexcept { return kind_; }
    std::uint32_t splits() const noexcept { return splits_; }

    const Hypervector& at(std::size_t level) const;
    const Hypervector& operator[](std::size_t level) const { return entries_[level]; }

    /// similarity(entry[anchor], entry[k]) for every level k.
    std::vector<double> similarity_profile(std::size_t anchor) const;

private:
    std::vector<Hypervector> entries_;
    MappingKind kind_;
    std::uint32_t splits_;
};

/// One independent random vector per level; all pairs pseudo-orthogonal.
ItemMemory build_orthogonal(RandomSource& rng, std::size_t levels, std::uint32_t dim);

/// Level 0 random; each following level flips a fresh batch of never-flipped
/// components, spending exactly floor(D/2) flips across the whole chain, so
/// h(entry[i], entry[j]) grows linearly in |i - j| and the two ends are
/// exactly orthogonal. levels must be >= 2.
ItemMemory build_linear(RandomSource& rng, std::size_t levels, std::uint32_t dim);

/// The level range is cut into `splits` contiguous runs; each run is its own
/// linear chain spending floor(D/2) flips, with the previous run's top vector
/// as its starting edge. Levels in the same run follow the exact linear law;
/// levels in non-adjacent runs are pseudo-orthogonal. splits = 1 degenerates
/// to build_linear (bit-identical under the same seed); splits = levels - 1
/// makes every pair of levels (pseudo-)orthogonal.
ItemMemory build_local_linear(RandomSource& rng, std::size_t levels, std::uint32_t splits,
                              std::uint32_t dim);

/// Baseline: `edges` random vectors at evenly spaced levels; an interior
/// level copies a leading block of components from its lower edge and the
/// rest from its upper edge, block sizes proportional to the distances.
ItemMemory build_concatenation(RandomSource& rng, std::size_t levels, std::uint32_t edges,
                               std::uint32_t dim);

} // namespace hdc
