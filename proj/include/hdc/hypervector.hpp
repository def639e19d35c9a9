#pragma once

#include <cstdint>
#include <vector>

#include "hdc/random.hpp"

namespace hdc {

/// Dense binary hypervector, bit-packed into 64-bit words. Component d is
/// stored at word d/64, bit d%64; unused trailing bits of the last word are
/// kept zero so word-level operations (XOR, popcount) see a clean tail.
///
/// Immutable after construction in normal use; all binary operations require
/// matching dimensions and throw std::invalid_argument otherwise.
class Hypervector {
public:
    static constexpr std::uint32_t kWordBits = 64;

    /// All-zeros vector of the given dimension. dim must be positive.
    explicit Hypervector(std::uint32_t dim);

    /// Each component drawn independently with probability 1/2.
    static Hypervector random(RandomSource& rng, std::uint32_t dim);

    std::uint32_t dim() const noexcept { return dim_; }
    std::size_t word_count() const noexcept { return words_.size(); }

    bool bit(std::uint32_t d) const;
    void set_bit(std::uint32_t d, bool value);
    void flip_bit(std::uint32_t d);

    std::uint32_t popcount() const noexcept;
    Hypervector complement() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }
    std::vector<std::uint64_t>& words_mut() noexcept { return words_; }

    /// Zeros any bits beyond dim in the last word. Callers that write words
    /// directly must restore this invariant.
    void mask_tail() noexcept;

    bool operator==(const Hypervector& other) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::uint32_t dim_;
};

/// Number of differing components.
std::uint32_t hamming(const Hypervector& v1, const Hypervector& v2);

/// 1 - hamming/D, in [0, 1]. Identical vectors give 1, complements give 0,
/// independent random vectors concentrate around 0.5.
double similarity(const Hypervector& v1, const Hypervector& v2);

/// Component-wise XOR. Commutative, associative, self-inverse, and exactly
/// Hamming-distance preserving.
Hypervector bind(const Hypervector& v1, const Hypervector& v2);

/// Cyclic left rotation by shift positions: result[d] = v[(d + shift) mod D].
/// Any integer shift is accepted; the effective amount is shift mod D.
Hypervector permute(const Hypervector& v, std::int64_t shift);

} // namespace hdc
