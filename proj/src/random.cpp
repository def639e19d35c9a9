#include "hdc/random.hpp"

#include <stdexcept>

namespace hdc {

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RandomSource::next_u64() {
    return engine_();
}

bool RandomSource::next_bit() {
    if (bits_left_ == 0) {
        bit_buffer_ = next_u64();
        bits_left_ = 64;
    }
    const bool bit = (bit_buffer_ & 1U) != 0;
    bit_buffer_ >>= 1;
    --bits_left_;
    return bit;
}

std::uint64_t RandomSource::uniform(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("RandomSource::uniform: bound must be nonzero");
    }
    // Rejection sampling: accept x >= 2^64 mod bound, then reduce.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x < threshold);
    return x % bound;
}

RandomSource RandomSource::child(std::uint64_t index) const {
    return RandomSource(mix_seed(seed_, index));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = root;
    for (std::uint64_t index : path) {
        s = mix_seed(s, index);
    }
    return s;
}

std::vector<std::uint32_t> shuffled_indices(std::uint32_t count, RandomSource& rng) {
    std::vector<std::uint32_t> order(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        order[i] = i;
    }
    for (std::uint32_t i = count; i > 1; --i) {
        const std::uint32_t j = static_cast<std::uint32_t>(rng.uniform(i));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

} // namespace hdc
