#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hdc/bundle.hpp"
#include "hdc/image.hpp"
#include "hdc/item_memory.hpp"

namespace hdc {

enum class EncoderKind {
    poi,           // patch vectors around points of interest, bound to position
    pixelwise,     // every pixel bound to its position
    permutation2d, // pixel value vectors rotated per axis
};

std::string to_string(EncoderKind kind);
EncoderKind encoder_kind_from_string(const std::string& name);

struct EncoderConfig {
    std::uint32_t dim = 10000;
    std::uint8_t threshold = 0;  // binarization threshold, strict (pixel > threshold)
    std::uint32_t patch_size = 3; // z, odd; poi encoder only
    std::uint32_t splits = 1;     // S for the global position memories
    EncoderKind kind = EncoderKind::poi;
    MappingKind patch_mapping = MappingKind::orthogonal; // in-patch position mapping

    void validate(std::uint32_t width, std::uint32_t height) const;
};

/// Atomic-vector stores shared by every sample of a run. Built once from a
/// single rng stream (in a fixed order, so a seed pins every entry), then
/// immutable and freely shareable.
///
/// Position memories use local linear mapping with the configured split
/// count; a split count at or above the axis length degrades to orthogonal
/// mapping, and a split count of 1 is plain linear mapping.
struct ImageMemories {
    EncoderConfig config;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::optional<ItemMemory> value;   // pixel values 0 and 1
    std::optional<ItemMemory> patch_x; // in-patch x positions, z levels
    std::optional<ItemMemory> patch_y;
    std::optional<ItemMemory> pos_x;   // image x positions, `width` levels
    std::optional<ItemMemory> pos_y;   // image y positions, `height` levels

    static ImageMemories build(const EncoderConfig& config, std::uint32_t width,
                               std::uint32_t height, RandomSource& rng);
};

/// Cache of patch vectors keyed by patch content. Patch encoding is
/// tie-free (z*z is odd), so caching cannot change any result; it only
/// amortizes the dominant cost across recurring patches. Not thread-safe:
/// give each worker its own cache.
struct PatchKey {
    std::array<std::uint64_t, 4> bits{};
    bool operator==(const PatchKey&) const = default;
};
struct PatchKeyHash {
    std::size_t operator()(const PatchKey& key) const noexcept;
};
using PatchVectorCache = std::unordered_map<PatchKey, Hypervector, PatchKeyHash>;

/// Every patch pixel is bound to its in-patch x and y vectors and the vector
/// of its binary value; the z*z bound triples are bundled and binarized.
/// The bundle size is odd, so `ties` is never consumed in practice.
Hypervector encode_patch(const Patch& patch, const ImageMemories& memories, RandomSource& ties);

/// The unified framework: one patch vector per point of interest, bound to
/// the POI's global x/y position vectors, bundled over all POIs and
/// binarized. A blank image (no POIs) encodes an empty bundle — every
/// component is a tie — and emits a diagnostic on stderr.
Hypervector encode_image_poi(const BinaryImage& img, const ImageMemories& memories,
                             RandomSource& ties, PatchVectorCache* cache = nullptr);

/// Baseline: bundle of (pos_x ⊗ pos_y ⊗ value) over all w*h pixels.
Hypervector encode_image_pixelwise(const BinaryImage& img, const ImageMemories& memories,
                                   RandomSource& ties);

/// Baseline: bundle of pixel value vectors rotated x times by the x-axis
/// permutation (step 1) and y times by the y-axis permutation (step width).
Hypervector encode_image_permutation2d(const BinaryImage& img, const ImageMemories& memories,
                                       RandomSource& ties);

/// Record-based encoding: features[j] is a level into `value_levels`; each
/// level vector is bound with the j-th id vector, all pairs bundled.
Hypervector encode_record(const std::vector<std::size_t>& features, const ItemMemory& ids,
                          const ItemMemory& value_levels, RandomSource& ties);

/// Convenience wrapper holding config, memories, and the patch cache;
/// dispatches on the configured encoder kind. One instance per worker.
class ImageEncoder {
public:
    ImageEncoder(const EncoderConfig& config, std::uint32_t width, std::uint32_t height,
                 RandomSource& memory_rng);

    const EncoderConfig& config() const noexcept { return memories_.config; }
    const ImageMemories& memories() const noexcept { return memories_; }

    Hypervector encode(const BinaryImage& img, RandomSource& ties);
    Hypervector encode(const Image& img, RandomSource& ties);

private:
    ImageMemories memories_;
    PatchVectorCache cache_;
};

} // namespace hdc
