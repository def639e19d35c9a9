#include "hdc/hypervector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace hdc {

namespace {

std::size_t words_for(std::uint32_t dim) {
    return (static_cast<std::size_t>(dim) + Hypervector::kWordBits - 1) / Hypervector::kWordBits;
}

void check_same_dim(const Hypervector& v1, const Hypervector& v2) {
    if (v1.dim() != v2.dim()) {
        throw std::invalid_argument("hypervector dimension mismatch: " +
                                    std::to_string(v1.dim()) + " vs " +
                                    std::to_string(v2.dim()));
    }
}

// Bits move toward index 0 by k positions; vacated high bits become zero.
std::vector<std::uint64_t> shift_down(const std::vector<std::uint64_t>& w, std::uint32_t k) {
    std::vector<std::uint64_t> out(w.size(), 0);
    const std::uint32_t q = k / 64, r = k % 64;
    for (std::size_t i = 0; i + q < w.size(); ++i) {
        std::uint64_t word = w[i + q] >> r;
        if (r != 0 && i + q + 1 < w.size()) {
            word |= w[i + q + 1] << (64 - r);
        }
        out[i] = word;
    }
    return out;
}

// Bits move toward higher indices by k positions.
std::vector<std::uint64_t> shift_up(const std::vector<std::uint64_t>& w, std::uint32_t k) {
    std::vector<std::uint64_t> out(w.size(), 0);
    const std::uint32_t q = k / 64, r = k % 64;
    for (std::size_t i = w.size(); i-- > q;) {
        std::uint64_t word = w[i - q] << r;
        if (r != 0 && i >= q + 1) {
            word |= w[i - q - 1] >> (64 - r);
        }
        out[i] = word;
    }
    return out;
}

} // namespace

Hypervector::Hypervector(std::uint32_t dim) : dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("hypervector dimension must be positive");
    }
    words_.assign(words_for(dim), 0);
}

Hypervector Hypervector::random(RandomSource& rng, std::uint32_t dim) {
    Hypervector v(dim);
    for (auto& word : v.words_) {
        word = rng.next_u64();
    }
    v.mask_tail();
    return v;
}

bool Hypervector::bit(std::uint32_t d) const {
    return (words_[d / kWordBits] >> (d % kWordBits)) & 1U;
}

void Hypervector::set_bit(std::uint32_t d, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (d % kWordBits);
    if (value) {
        words_[d / kWordBits] |= mask;
    } else {
        words_[d / kWordBits] &= ~mask;
    }
}

void Hypervector::flip_bit(std::uint32_t d) {
    words_[d / kWordBits] ^= std::uint64_t{1} << (d % kWordBits);
}

std::uint32_t Hypervector::popcount() const noexcept {
    std::uint32_t total = 0;
    for (std::uint64_t word : words_) {
        total += static_cast<std::uint32_t>(std::popcount(word));
    }
    return total;
}

Hypervector Hypervector::complement() const {
    Hypervector out(dim_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
        out.words_[i] = ~words_[i];
    }
    out.mask_tail();
    return out;
}

void Hypervector::mask_tail() noexcept {
    const std::uint32_t used = dim_ % kWordBits;
    if (used != 0) {
        words_.back() &= (~std::uint64_t{0}) >> (kWordBits - used);
    }
}

std::uint32_t hamming(const Hypervector& v1, const Hypervector& v2) {
    check_same_dim(v1, v2);
    std::uint32_t total = 0;
    const auto& a = v1.words();
    const auto& b = v2.words();
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
    }
    return total;
}

double similarity(const Hypervector& v1, const Hypervector& v2) {
    return 1.0 - static_cast<double>(hamming(v1, v2)) / static_cast<double>(v1.dim());
}

Hypervector bind(const Hypervector& v1, const Hypervector& v2) {
    check_same_dim(v1, v2);
    Hypervector out(v1.dim());
    auto& w = out.words_mut();
    const auto& a = v1.words();
    const auto& b = v2.words();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = a[i] ^ b[i];
    }
    return out;
}

Hypervector permute(const Hypervector& v, std::int64_t shift) {
    const std::int64_t dim = v.dim();
    std::uint32_t k = static_cast<std::uint32_t>(((shift % dim) + dim) % dim);
    if (k == 0) {
        return v;
    }
    Hypervector out(v.dim());
    const auto low = shift_down(v.words(), k);
    const auto high = shift_up(v.words(), v.dim() - k);
    auto& w = out.words_mut();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = low[i] | high[i];
    }
    out.mask_tail();
    return out;
}

} // namespace hdc
