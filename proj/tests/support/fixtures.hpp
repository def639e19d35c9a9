#pragma once

// Byte-level writers for IDX and NPY fixtures, built by hand so loader tests
// do not depend on the code they verify.

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fixtures {

inline void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

inline std::vector<std::uint8_t> idx_image_bytes(std::uint32_t count, std::uint32_t rows,
                                                 std::uint32_t cols,
                                                 const std::vector<std::uint8_t>& pixels,
                                                 std::uint32_t magic = 0x00000803) {
    std::vector<std::uint8_t> out;
    append_be32(out, magic);
    append_be32(out, count);
    append_be32(out, rows);
    append_be32(out, cols);
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

inline std::vector<std::uint8_t> idx_label_bytes(const std::vector<std::uint8_t>& labels,
                                                 std::uint32_t magic = 0x00000801) {
    std::vector<std::uint8_t> out;
    append_be32(out, magic);
    append_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("fixture: cannot open " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

inline void write_gzip(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    gzFile file = gzopen(path.c_str(), "wb9");
    if (file == nullptr) {
        throw std::runtime_error("fixture: cannot open " + path);
    }
    if (gzwrite(file, bytes.data(), static_cast<unsigned>(bytes.size())) !=
        static_cast<int>(bytes.size())) {
        gzclose(file);
        throw std::runtime_error("fixture: gzwrite failed for " + path);
    }
    gzclose(file);
}

// NPY with an explicit dict header (the caller controls every field).
inline std::vector<std::uint8_t> npy_bytes(const std::string& descr, bool fortran_order,
                                           const std::vector<std::size_t>& shape,
                                           const std::vector<std::uint8_t>& payload,
                                           unsigned version_major = 1) {
    std::string dict = "{'descr': '" + descr + "', 'fortran_order': " +
                       (fortran_order ? "True" : "False") + ", 'shape': (";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        dict += std::to_string(shape[i]);
        if (shape.size() == 1 || i + 1 < shape.size()) {
            dict += i + 1 < shape.size() ? ", " : ",";
        }
    }
    dict += "), }";
    const std::size_t prefix = version_major == 1 ? 10 : 12;
    // Pad with spaces so the full header size is a multiple of 64, ending in
    // a newline, matching the format spec.
    std::size_t total = prefix + dict.size() + 1;
    const std::size_t padded = (total + 63) / 64 * 64;
    dict.append(padded - total, ' ');
    dict += '\n';

    std::vector<std::uint8_t> out = {0x93, 'N', 'U', 'M', 'P', 'Y',
                                     static_cast<std::uint8_t>(version_major), 0};
    const std::size_t header_len = dict.size();
    out.push_back(static_cast<std::uint8_t>(header_len & 0xFF));
    out.push_back(static_cast<std::uint8_t>((header_len >> 8) & 0xFF));
    if (version_major == 2) {
        out.push_back(static_cast<std::uint8_t>((header_len >> 16) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((header_len >> 24) & 0xFF));
    }
    out.insert(out.end(), dict.begin(), dict.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::vector<std::uint8_t> i64_payload(const std::vector<std::int64_t>& values) {
    std::vector<std::uint8_t> out;
    for (std::int64_t v : values) {
        for (int b = 0; b < 8; ++b) {
            out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(v) >> (8 * b)) & 0xFF));
        }
    }
    return out;
}

} // namespace fixtures
