#include "hdc/bundle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hdc {

namespace {

void check_dim(const Bundle& b, const Hypervector& v) {
    if (b.dim() != v.dim()) {
        throw std::invalid_argument("bundle/hypervector dimension mismatch: " +
                                    std::to_string(b.dim()) + " vs " +
                                    std::to_string(v.dim()));
    }
}

} // namespace

Bundle::Bundle(std::uint32_t dim) : dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("bundle dimension must be positive");
    }
    counts_.assign(dim, 0);
}

void Bundle::add(const Hypervector& v) {
    check_dim(*this, v);
    const auto& words = v.words();
    std::int32_t* counts = counts_.data();
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::uint64_t word = words[i];
        const std::uint32_t base = static_cast<std::uint32_t>(i) * Hypervector::kWordBits;
        const std::uint32_t bits = std::min<std::uint32_t>(Hypervector::kWordBits, dim_ - base);
        for (std::uint32_t b = 0; b < bits; ++b) {
            counts[base + b] += static_cast<std::int32_t>(word & 1U);
            word >>= 1;
        }
    }
    ++n_;
}

void Bundle::remove(const Hypervector& v) {
    check_dim(*this, v);
    if (n_ == 0) {
        throw std::underflow_error("bundle remove: bundle is empty");
    }
    const auto& words = v.words();
    std::int32_t* counts = counts_.data();
    std::int32_t lowest = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::uint64_t word = words[i];
        const std::uint32_t base = static_cast<std::uint32_t>(i) * Hypervector::kWordBits;
        const std::uint32_t bits = std::min<std::uint32_t>(Hypervector::kWordBits, dim_ - base);
        for (std::uint32_t b = 0; b < bits; ++b) {
            const std::int32_t c = (counts[base + b] -= static_cast<std::int32_t>(word & 1U));
            lowest = std::min(lowest, c);
            word >>= 1;
        }
    }
    if (lowest < 0) {
        // Roll back so a failed remove leaves the bundle untouched.
        for (std::size_t i = 0; i < words.size(); ++i) {
            std::uint64_t word = words[i];
            const std::uint32_t base = static_cast<std::uint32_t>(i) * Hypervector::kWordBits;
            const std::uint32_t bits = std::min<std::uint32_t>(Hypervector::kWordBits, dim_ - base);
            for (std::uint32_t b = 0; b < bits; ++b) {
                counts[base + b] += static_cast<std::int32_t>(word & 1U);
                word >>= 1;
            }
        }
        throw std::underflow_error("bundle remove: vector was never added "
                                   "(a component count would go negative)");
    }
    --n_;
}

void Bundle::subtract(const Hypervector& v) {
    check_dim(*this, v);
    if (n_ == 0) {
        throw std::underflow_error("bundle subtract: bundle is empty");
    }
    const auto& words = v.words();
    std::int32_t* counts = counts_.data();
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::uint64_t word = words[i];
        const std::uint32_t base = static_cast<std::uint32_t>(i) * Hypervector::kWordBits;
        const std::uint32_t bits = std::min<std::uint32_t>(Hypervector::kWordBits, dim_ - base);
        for (std::uint32_t b = 0; b < bits; ++b) {
            counts[base + b] -= static_cast<std::int32_t>(word & 1U);
            word >>= 1;
        }
    }
    --n_;
}

void Bundle::restore(std::vector<std::int32_t> counts, std::uint32_t n) {
    if (counts.size() != dim_) {
        throw std::invalid_argument("bundle restore: counts length does not match dimension");
    }
    counts_ = std::move(counts);
    n_ = n;
}

Hypervector Bundle::binarize(RandomSource& rng) const {
    Hypervector out(dim_);
    // Compare 2*counts[d] against n to avoid fractional n/2.
    const std::int64_t n = n_;
    for (std::uint32_t d = 0; d < dim_; ++d) {
        const std::int64_t doubled = 2 * static_cast<std::int64_t>(counts_[d]);
        if (doubled > n) {
            out.set_bit(d, true);
        } else if (doubled == n && rng.next_bit()) {
            out.set_bit(d, true);
        }
    }
    return out;
}

} // namespace hdc
