#pragma once

#include <cstdint>
#include <vector>

#include "hdc/hypervector.hpp"
#include "hdc/random.hpp"

namespace hdc {

/// Integer accumulator for bundling hypervectors: counts[d] tracks how many
/// of the n added vectors had component d set. For pure add/remove usage
/// 0 <= counts[d] <= n holds throughout.
class Bundle {
public:
    explicit Bundle(std::uint32_t dim);

    std::uint32_t dim() const noexcept { return dim_; }

    /// Number of vectors currently bundled.
    std::uint32_t size() const noexcept { return n_; }

    const std::vector<std::int32_t>& counts() const noexcept { return counts_; }

    void add(const Hypervector& v);

    /// Inverse of add. Throws std::underflow_error when the bundle is empty
    /// or any component would go negative (i.e. v was never added).
    void remove(const Hypervector& v);

    /// Like remove but without the membership check: counts may go negative.
    /// This is the classifier's retraining update, where a sample is
    /// subtracted from a class it was never bundled into; the majority rule
    /// stays well defined on negative counts.
    void subtract(const Hypervector& v);

    /// Majority rule: component d becomes 1 when counts[d] > n/2, 0 when
    /// counts[d] < n/2, and a coin from rng on an exact tie. Tie bits are
    /// consumed in component order, so the result is a deterministic
    /// function of (counts, n, rng state).
    Hypervector binarize(RandomSource& rng) const;

    /// Replaces the accumulator state wholesale (deserialization).
    void restore(std::vector<std::int32_t> counts, std::uint32_t n);

    bool operator==(const Bundle& other) const = default;

private:
    std::vector<std::int32_t> counts_;
    std::uint32_t n_ = 0;
    std::uint32_t dim_;
};

} // namespace hdc
