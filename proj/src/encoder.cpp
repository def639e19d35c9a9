#include "hdc/encoder.hpp"

#include <algorithm>
#include <bit>
#include <iostream>
#include <stdexcept>
#include <string>

namespace hdc {

namespace {

// XOR of three equal-dimension vectors written into `out` without temporaries.
void xor3_into(Hypervector& out, const Hypervector& a, const Hypervector& b,
               const Hypervector& c) {
    auto& w = out.words_mut();
    const auto& wa = a.words();
    const auto& wb = b.words();
    const auto& wc = c.words();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = wa[i] ^ wb[i] ^ wc[i];
    }
}

// Word-parallel majority accumulator: per-component counts live in bit
// planes, so adding a term costs a short ripple-carry over words instead of
// one scalar increment per component. Only valid up to max_count additions.
class BitslicedCounter {
public:
    BitslicedCounter(std::size_t words, std::uint32_t max_count)
        : words_(words), plane_count_(std::bit_width(max_count)) {
        planes_.assign(words_ * plane_count_, 0);
    }

    void add(const std::vector<std::uint64_t>& term) {
        for (std::size_t i = 0; i < words_; ++i) {
            std::uint64_t carry = term[i];
            for (std::uint32_t p = 0; p < plane_count_ && carry != 0; ++p) {
                std::uint64_t& w = planes_[p * words_ + i];
                const std::uint64_t old = w;
                w = old ^ carry;
                carry = old & carry;
            }
        }
    }

    // Sets each component of `out` to (count > threshold).
    void threshold_into(std::uint32_t threshold, Hypervector& out) const {
        auto& w = out.words_mut();
        for (std::size_t i = 0; i < words_; ++i) {
            std::uint64_t greater = 0;
            std::uint64_t equal = ~std::uint64_t{0};
            for (std::int32_t p = static_cast<std::int32_t>(plane_count_) - 1; p >= 0; --p) {
                const std::uint64_t plane = planes_[static_cast<std::size_t>(p) * words_ + i];
                if ((threshold >> p) & 1U) {
                    equal &= plane;
                } else {
                    greater |= equal & plane;
                    equal &= ~plane;
                }
            }
            w[i] = greater;
        }
        out.mask_tail();
    }

private:
    std::vector<std::uint64_t> planes_;
    std::size_t words_;
    std::uint32_t plane_count_;
};

ItemMemory build_position_memory(RandomSource& rng, std::uint32_t levels, std::uint32_t splits,
                                 std::uint32_t dim) {
    if (levels == 1 || splits >= levels) {
        return build_orthogonal(rng, levels, dim);
    }
    if (splits == 1) {
        return build_linear(rng, levels, dim);
    }
    return build_local_linear(rng, levels, splits, dim);
}

ItemMemory build_patch_memory(RandomSource& rng, std::uint32_t levels, MappingKind mapping,
                              std::uint32_t dim) {
    if (levels >= 2 && mapping == MappingKind::linear) {
        return build_linear(rng, levels, dim);
    }
    return build_orthogonal(rng, levels, dim);
}

PatchKey make_patch_key(const Patch& patch) {
    PatchKey key;
    for (std::size_t p = 0; p < patch.pixels.size(); ++p) {
        if (patch.pixels[p]) {
            key.bits[p / 64] |= std::uint64_t{1} << (p % 64);
        }
    }
    return key;
}

} // namespace

std::string to_string(EncoderKind kind) {
    switch (kind) {
    case EncoderKind::poi: return "poi";
    case EncoderKind::pixelwise: return "pixelwise";
    case EncoderKind::permutation2d: return "permutation2d";
    }
    return "unknown";
}

EncoderKind encoder_kind_from_string(const std::string& name) {
    if (name == "poi") return EncoderKind::poi;
    if (name == "pixelwise") return EncoderKind::pixelwise;
    if (name == "permutation2d") return EncoderKind::permutation2d;
    throw std::invalid_argument("unknown encoder kind: " + name);
}

void EncoderConfig::validate(std::uint32_t width, std::uint32_t height) const {
    if (dim == 0) {
        throw std::invalid_argument("encoder: dimension must be positive");
    }
    if (width == 0 || height == 0) {
        throw std::invalid_argument("encoder: image dimensions must be positive");
    }
    if (kind == EncoderKind::poi && (patch_size == 0 || patch_size % 2 == 0)) {
        throw std::invalid_argument("encoder: patch size must be odd, got " +
                                    std::to_string(patch_size));
    }
    if (kind != EncoderKind::permutation2d) {
        if (splits < 1 || splits > std::max(width, height)) {
            throw std::invalid_argument("encoder: splits must lie in [1, side length], got " +
                                        std::to_string(splits));
        }
    }
    if (kind == EncoderKind::permutation2d &&
        static_cast<std::uint64_t>(width) * (height + 1) > dim) {
        throw std::invalid_argument(
            "encoder: permutation2d needs dim >= width*(height+1) to keep positions distinct");
    }
    if (patch_mapping != MappingKind::orthogonal && patch_mapping != MappingKind::linear) {
        throw std::invalid_argument("encoder: patch mapping must be orthogonal or linear");
    }
}

ImageMemories ImageMemories::build(const EncoderConfig& config, std::uint32_t width,
                                   std::uint32_t height, RandomSource& rng) {
    config.validate(width, height);
    ImageMemories m;
    m.config = config;
    m.width = width;
    m.height = height;
    // Fixed build order; every memory's content is pinned by the rng seed.
    m.value = build_orthogonal(rng, 2, config.dim);
    if (config.kind == EncoderKind::poi) {
        m.patch_x = build_patch_memory(rng, config.patch_size, config.patch_mapping, config.dim);
        m.patch_y = build_patch_memory(rng, config.patch_size, config.patch_mapping, config.dim);
    }
    if (config.kind == EncoderKind::poi || config.kind == EncoderKind::pixelwise) {
        m.pos_x = build_position_memory(rng, width, config.splits, config.dim);
        m.pos_y = build_position_memory(rng, height, config.splits, config.dim);
    }
    return m;
}

std::size_t PatchKeyHash::operator()(const PatchKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t word : key.bits) {
        h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

Hypervector encode_patch(const Patch& patch, const ImageMemories& memories,
                         [[maybe_unused]] RandomSource& ties) {
    const std::uint32_t z = patch.size;
    if (z == 0 || z % 2 == 0) {
        throw std::invalid_argument("encode_patch: patch size must be odd");
    }
    if (!memories.patch_x || !memories.patch_y || !memories.value) {
        throw std::invalid_argument("encode_patch: memories lack patch/value stores");
    }
    if (memories.patch_x->size() != z || memories.patch_y->size() != z) {
        throw std::invalid_argument("encode_patch: patch size does not match memories");
    }
    const std::uint32_t dim = memories.config.dim;
    // z*z is odd, so the majority has no ties and `ties` is never consumed.
    const std::uint32_t terms = z * z;
    Hypervector scratch(dim);
    BitslicedCounter acc(scratch.word_count(), terms);
    for (std::uint32_t j = 0; j < z; ++j) {
        for (std::uint32_t i = 0; i < z; ++i) {
            const Hypervector& value = (*memories.value)[patch.at(i, j) ? 1 : 0];
            xor3_into(scratch, (*memories.patch_x)[i], (*memories.patch_y)[j], value);
            acc.add(scratch.words());
        }
    }
    Hypervector out(dim);
    acc.threshold_into(terms / 2, out);
    return out;
}

Hypervector encode_image_poi(const BinaryImage& img, const ImageMemories& memories,
                             RandomSource& ties, PatchVectorCache* cache) {
    if (!memories.pos_x || !memories.pos_y) {
        throw std::invalid_argument("encode_image_poi: memories lack position stores");
    }
    if (img.width != memories.width || img.height != memories.height) {
        throw std::invalid_argument("encode_image_poi: image size does not match memories");
    }
    const std::uint32_t z = memories.config.patch_size;
    const bool cacheable = cache != nullptr && static_cast<std::size_t>(z) * z <= 256;
    const auto pois = select_pois(img);
    if (pois.empty()) {
        std::cerr << "hdc: warning: image has no points of interest; "
                     "encoding an empty bundle\n";
    }
    const std::uint32_t dim = memories.config.dim;
    Bundle acc(dim);
    Hypervector scratch(dim);
    for (const auto& [x, y] : pois) {
        const Patch patch = extract_patch(img, x, y, z);
        if (cacheable) {
            const PatchKey key = make_patch_key(patch);
            auto it = cache->find(key);
            if (it == cache->end()) {
                it = cache->emplace(key, encode_patch(patch, memories, ties)).first;
            }
            xor3_into(scratch, it->second, (*memories.pos_x)[x], (*memories.pos_y)[y]);
        } else {
            const Hypervector patch_vector = encode_patch(patch, memories, ties);
            xor3_into(scratch, patch_vector, (*memories.pos_x)[x], (*memories.pos_y)[y]);
        }
        acc.add(scratch);
    }
    return acc.binarize(ties);
}

Hypervector encode_image_pixelwise(const BinaryImage& img, const ImageMemories& memories,
                                   RandomSource& ties) {
    if (!memories.pos_x || !memories.pos_y || !memories.value) {
        throw std::invalid_argument("encode_image_pixelwise: memories lack position stores");
    }
    if (img.width != memories.width || img.height != memories.height) {
        throw std::invalid_argument("encode_image_pixelwise: image size does not match memories");
    }
    const std::uint32_t dim = memories.config.dim;
    Bundle acc(dim);
    Hypervector scratch(dim);
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            const Hypervector& value = (*memories.value)[img.at(x, y) ? 1 : 0];
            xor3_into(scratch, (*memories.pos_x)[x], (*memories.pos_y)[y], value);
            acc.add(scratch);
        }
    }
    return acc.binarize(ties);
}

Hypervector encode_image_permutation2d(const BinaryImage& img, const ImageMemories& memories,
                                       RandomSource& ties) {
    if (!memories.value) {
        throw std::invalid_argument("encode_image_permutation2d: memories lack the value store");
    }
    Bundle acc(memories.config.dim);
    // Distinct cyclic permutations per axis: rotating by 1 per x application
    // and by `width` per y application gives every pixel a unique total
    // rotation. Application counts are 1-based (column x applies the x-axis
    // permutation x+1 times).
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            const Hypervector& value = (*memories.value)[img.at(x, y) ? 1 : 0];
            acc.add(permute(value, static_cast<std::int64_t>(x) + 1 +
                                       (static_cast<std::int64_t>(y) + 1) * img.width));
        }
    }
    return acc.binarize(ties);
}

Hypervector encode_record(const std::vector<std::size_t>& features, const ItemMemory& ids,
                          const ItemMemory& value_levels, RandomSource& ties) {
    if (features.size() != ids.size()) {
        throw std::invalid_argument("encode_record: feature count does not match id memory size");
    }
    if (features.empty()) {
        throw std::invalid_argument("encode_record: empty feature vector");
    }
    Bundle acc(ids.dim());
    for (std::size_t j = 0; j < features.size(); ++j) {
        if (features[j] >= value_levels.size()) {
            throw std::out_of_range("encode_record: feature " + std::to_string(j) +
                                    " value " + std::to_string(features[j]) +
                                    " outside the value memory range");
        }
        acc.add(bind(value_levels[features[j]], ids[j]));
    }
    return acc.binarize(ties);
}

ImageEncoder::ImageEncoder(const EncoderConfig& config, std::uint32_t width, std::uint32_t height,
                           RandomSource& memory_rng)
    : memories_(ImageMemories::build(config, width, height, memory_rng)) {}

Hypervector ImageEncoder::encode(const BinaryImage& img, RandomSource& ties) {
    switch (memories_.config.kind) {
    case EncoderKind::poi:
        return encode_image_poi(img, memories_, ties, &cache_);
    case EncoderKind::pixelwise:
        return encode_image_pixelwise(img, memories_, ties);
    case EncoderKind::permutation2d:
        return encode_image_permutation2d(img, memories_, ties);
    }
    throw std::logic_error("unreachable encoder kind");
}

Hypervector ImageEncoder::encode(const Image& img, RandomSource& ties) {
    const BinaryImage bin = binarize_image(img, memories_.config.threshold);
    return encode(bin, ties);
}

} // namespace hdc
