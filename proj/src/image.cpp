#include "hdc/image.hpp"

#include <stdexcept>

namespace hdc {

BinaryImage binarize_image(const Image& img, std::uint8_t threshold) {
    BinaryImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = img.pixels[i] > threshold ? 1 : 0;
    }
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> select_pois(const BinaryImage& img) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pois;
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            if (img.at(x, y)) {
                pois.emplace_back(x, y);
            }
        }
    }
    return pois;
}

Patch extract_patch(const BinaryImage& img, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    if (z == 0 || z % 2 == 0) {
        throw std::invalid_argument("patch size must be odd and positive");
    }
    Patch patch;
    patch.size = z;
    patch.center_x = x;
    patch.center_y = y;
    patch.pixels.assign(static_cast<std::size_t>(z) * z, 0);
    const std::int64_t half = z / 2;
    for (std::uint32_t j = 0; j < z; ++j) {
        const std::int64_t sy = static_cast<std::int64_t>(y) - half + j;
        if (sy < 0 || sy >= static_cast<std::int64_t>(img.height)) {
            continue;
        }
        for (std::uint32_t i = 0; i < z; ++i) {
            const std::int64_t sx = static_cast<std::int64_t>(x) - half + i;
            if (sx < 0 || sx >= static_cast<std::int64_t>(img.width)) {
                continue;
            }
            patch.pixels[static_cast<std::size_t>(j) * z + i] =
                img.at(static_cast<std::uint32_t>(sx), static_cast<std::uint32_t>(sy)) ? 1 : 0;
        }
    }
    return patch;
}

} // namespace hdc
