#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdc/image.hpp"

namespace hdc {

/// Images with class labels. Labels are class indices below class_count.
struct LabeledDataset {
    std::string name;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t class_count = 10;
    std::vector<Image> images;
    std::vector<std::uint8_t> labels;

    std::size_t size() const noexcept { return images.size(); }
};

/// Reads a whole file into memory; gzip-compressed files (by content, not
/// extension) are transparently decompressed.
std::vector<std::uint8_t> read_file_bytes(const std::string& path);

/// IDX pair loader (big-endian): image file magic 0x00000803 with dims
/// (count, rows, cols), label file magic 0x00000801. Gzipped files accepted.
LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path);

/// NPY loader for unsigned-byte arrays, versions 1.0/2.0, C order. Images
/// must have shape (N, H, W) or (N, H, W, 1); labels shape (N,).
LabeledDataset load_npy_u8(const std::string& images_path, const std::string& labels_path);

/// Seeded shuffle followed by round-robin fold assignment; folds partition
/// the dataset and sizes differ by at most one.
struct FoldPlan {
    std::uint32_t fold_count = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> assignments; // per-sample fold index

    std::vector<std::size_t> indices_in(std::uint32_t fold) const;
    std::vector<std::size_t> indices_not_in(std::uint32_t fold) const;
};

FoldPlan make_folds(const LabeledDataset& ds, std::uint32_t fold_count, std::uint64_t seed);

/// First per_class samples of each class in seeded-shuffle order;
/// per_class = 0 returns the dataset unchanged.
LabeledDataset subset_per_class(const LabeledDataset& ds, std::uint32_t per_class,
                                std::uint64_t seed);

} // namespace hdc
