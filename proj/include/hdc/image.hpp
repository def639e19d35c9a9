#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hdc {

/// Grayscale image, row-major, intensities 0-255.
struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::uint32_t x, std::uint32_t y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Image with pixel values restricted to {0, 1}.
struct BinaryImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;

    bool at(std::uint32_t x, std::uint32_t y) const {
        return pixels[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

/// Square window of binary pixels around a point of interest. Positions
/// outside the source image read as 0.
struct Patch {
    std::uint32_t size = 0; // side length z, odd
    std::uint32_t center_x = 0;
    std::uint32_t center_y = 0;
    std::vector<std::uint8_t> pixels; // z*z, row-major

    bool at(std::uint32_t i, std::uint32_t j) const {
        return pixels[static_cast<std::size_t>(j) * size + i] != 0;
    }
};

/// Thresholding: output pixel is 1 iff intensity > threshold (strict).
BinaryImage binarize_image(const Image& img, std::uint8_t threshold);

/// Positions of every foreground pixel, scanned row by row.
std::vector<std::pair<std::uint32_t, std::uint32_t>> select_pois(const BinaryImage& img);

/// z x z window centered on (x, y), zero-padded at the borders. z must be odd.
Patch extract_patch(const BinaryImage& img, std::uint32_t x, std::uint32_t y, std::uint32_t z);

} // namespace hdc
