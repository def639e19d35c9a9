#include "hdc/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

#include "hdc/random.hpp"

namespace hdc {

namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t offset,
                        const std::string& path, const char* field) {
    if (offset + 4 > buf.size()) {
        throw std::runtime_error(path + ": truncated while reading " + field);
    }
    return (static_cast<std::uint32_t>(buf[offset]) << 24) |
           (static_cast<std::uint32_t>(buf[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(buf[offset + 2]) << 8) |
           static_cast<std::uint32_t>(buf[offset + 3]);
}

std::string hex32(std::uint32_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out = "0x";
    for (int shift = 28; shift >= 0; shift -= 4) {
        out += digits[(v >> shift) & 0xF];
    }
    return out;
}

void check_labels(const LabeledDataset& ds, const std::string& path) {
    for (std::uint8_t label : ds.labels) {
        if (label >= ds.class_count) {
            throw std::runtime_error(path + ": label value " + std::to_string(label) +
                                     " outside the declared class count " +
                                     std::to_string(ds.class_count));
        }
    }
}

// ---- NPY header --------------------------------------------------------

struct NpyHeader {
    std::string descr;
    bool fortran_order = false;
    std::vector<std::size_t> shape;
    std::size_t data_offset = 0;
};

std::string find_dict_value(const std::string& header, const std::string& key,
                            const std::string& path) {
    const std::string quoted = "'" + key + "'";
    const std::size_t key_pos = header.find(quoted);
    if (key_pos == std::string::npos) {
        throw std::runtime_error(path + ": npy header lacks the '" + key + "' field");
    }
    std::size_t pos = header.find(':', key_pos + quoted.size());
    if (pos == std::string::npos) {
        throw std::runtime_error(path + ": malformed npy header near '" + key + "'");
    }
    ++pos;
    while (pos < header.size() && header[pos] == ' ') {
        ++pos;
    }
    // Value ends at the matching comma or closing brace; tuples keep their
    // parentheses.
    std::size_t end = pos;
    int depth = 0;
    for (; end < header.size(); ++end) {
        const char c = header[end];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        } else if ((c == ',' || c == '}') && depth == 0) {
            break;
        }
    }
    std::string value = header.substr(pos, end - pos);
    while (!value.empty() && value.back() == ' ') {
        value.pop_back();
    }
    return value;
}

NpyHeader parse_npy_header(const std::vector<std::uint8_t>& buf, const std::string& path) {
    static const char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};
    if (buf.size() < 10 || std::memcmp(buf.data(), kMagic, 6) != 0) {
        throw std::runtime_error(path + ": not an npy file (bad magic)");
    }
    const unsigned major = buf[6];
    const unsigned minor = buf[7];
    if ((major != 1 && major != 2) || minor != 0) {
        throw std::runtime_error(path + ": unsupported npy version " + std::to_string(major) +
                                 "." + std::to_string(minor));
    }
    std::size_t header_len = 0;
    std::size_t header_start = 0;
    if (major == 1) {
        header_len = buf[8] | (static_cast<std::size_t>(buf[9]) << 8);
        header_start = 10;
    } else {
        if (buf.size() < 12) {
            throw std::runtime_error(path + ": truncated npy header length");
        }
        header_len = buf[8] | (static_cast<std::size_t>(buf[9]) << 8) |
                     (static_cast<std::size_t>(buf[10]) << 16) |
                     (static_cast<std::size_t>(buf[11]) << 24);
        header_start = 12;
    }
    if (header_start + header_len > buf.size()) {
        throw std::runtime_error(path + ": truncated npy header");
    }
    const std::string header(reinterpret_cast<const char*>(buf.data()) + header_start,
                             header_len);

    NpyHeader out;
    out.data_offset = header_start + header_len;

    std::string descr = find_dict_value(header, "descr", path);
    if (descr.size() >= 2 && (descr.front() == '\'' || descr.front() == '"')) {
        descr = descr.substr(1, descr.size() - 2);
    }
    out.descr = descr;

    const std::string order = find_dict_value(header, "fortran_order", path);
    if (order == "False") {
        out.fortran_order = false;
    } else if (order == "True") {
        out.fortran_order = true;
    } else {
        throw std::runtime_error(path + ": unsupported 'fortran_order' value " + order);
    }

    std::string shape = find_dict_value(header, "shape", path);
    if (shape.empty() || shape.front() != '(' || shape.back() != ')') {
        throw std::runtime_error(path + ": malformed 'shape' field " + shape);
    }
    shape = shape.substr(1, shape.size() - 2);
    std::size_t pos = 0;
    while (pos < shape.size()) {
        while (pos < shape.size() && (shape[pos] == ' ' || shape[pos] == ',')) {
            ++pos;
        }
        if (pos >= shape.size()) {
            break;
        }
        std::size_t digits = 0;
        std::size_t value = 0;
        while (pos < shape.size() && shape[pos] >= '0' && shape[pos] <= '9') {
            value = value * 10 + static_cast<std::size_t>(shape[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) {
            throw std::runtime_error(path + ": malformed 'shape' field (" + shape + ")");
        }
        out.shape.push_back(value);
    }
    return out;
}

std::size_t element_count(const NpyHeader& header) {
    std::size_t count = 1;
    for (std::size_t extent : header.shape) {
        count *= extent;
    }
    return count;
}

bool is_u8_descr(const std::string& descr) {
    return descr == "|u1" || descr == "<u1" || descr == ">u1" || descr == "u1";
}

} // namespace

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw std::runtime_error("cannot open file: " + path);
    }
    gzbuffer(file, 1 << 20);
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> chunk(1 << 20);
    int got = 0;
    while ((got = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()))) > 0) {
        out.insert(out.end(), chunk.begin(), chunk.begin() + got);
    }
    if (got < 0) {
        int errnum = 0;
        const char* msg = gzerror(file, &errnum);
        const std::string detail = msg != nullptr ? msg : "unknown zlib error";
        gzclose(file);
        throw std::runtime_error("failed reading " + path + ": " + detail);
    }
    gzclose(file);
    return out;
}

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path) {
    const auto image_bytes = read_file_bytes(images_path);
    const auto label_bytes = read_file_bytes(labels_path);

    const std::uint32_t image_magic = read_be32(image_bytes, 0, images_path, "magic");
    if (image_magic != kIdxImageMagic) {
        throw std::runtime_error(images_path + ": bad magic " + hex32(image_magic) +
                                 ", expected " + hex32(kIdxImageMagic) + " (idx image file)");
    }
    const std::uint32_t count = read_be32(image_bytes, 4, images_path, "image count");
    const std::uint32_t rows = read_be32(image_bytes, 8, images_path, "row count");
    const std::uint32_t cols = read_be32(image_bytes, 12, images_path, "column count");
    const std::size_t expected =
        16 + static_cast<std::size_t>(count) * rows * cols;
    if (image_bytes.size() < expected) {
        throw std::runtime_error(images_path + ": truncated image payload (have " +
                                 std::to_string(image_bytes.size()) + " bytes, need " +
                                 std::to_string(expected) + ")");
    }

    const std::uint32_t label_magic = read_be32(label_bytes, 0, labels_path, "magic");
    if (label_magic != kIdxLabelMagic) {
        throw std::runtime_error(labels_path + ": bad magic " + hex32(label_magic) +
                                 ", expected " + hex32(kIdxLabelMagic) + " (idx label file)");
    }
    const std::uint32_t label_count = read_be32(label_bytes, 4, labels_path, "label count");
    if (label_count != count) {
        throw std::runtime_error("image/label count mismatch: " + images_path + " has " +
                                 std::to_string(count) + ", " + labels_path + " has " +
                                 std::to_string(label_count));
    }
    if (label_bytes.size() < 8 + static_cast<std::size_t>(label_count)) {
        throw std::runtime_error(labels_path + ": truncated label payload");
    }

    LabeledDataset ds;
    ds.name = images_path;
    ds.width = cols;
    ds.height = rows;
    ds.images.reserve(count);
    ds.labels.assign(label_bytes.begin() + 8, label_bytes.begin() + 8 + label_count);
    const std::size_t pixels_per_image = static_cast<std::size_t>(rows) * cols;
    for (std::uint32_t i = 0; i < count; ++i) {
        Image img;
        img.width = cols;
        img.height = rows;
        const std::size_t offset = 16 + i * pixels_per_image;
        img.pixels.assign(image_bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                          image_bytes.begin() + static_cast<std::ptrdiff_t>(offset + pixels_per_image));
        ds.images.push_back(std::move(img));
    }
    check_labels(ds, labels_path);
    return ds;
}

LabeledDataset load_npy_u8(const std::string& images_path, const std::string& labels_path) {
    const auto image_bytes = read_file_bytes(images_path);
    const auto label_bytes = read_file_bytes(labels_path);

    const NpyHeader image_header = parse_npy_header(image_bytes, images_path);
    if (!is_u8_descr(image_header.descr)) {
        throw std::runtime_error(images_path + ": unsupported 'descr' " + image_header.descr +
                                 " (need unsigned byte u1)");
    }
    if (image_header.fortran_order) {
        throw std::runtime_error(images_path +
                                 ": unsupported layout: 'fortran_order' must be False");
    }
    auto shape = image_header.shape;
    if (shape.size() == 4 && shape[3] == 1) {
        shape.pop_back(); // squeeze the trailing singleton channel axis
    }
    if (shape.size() != 3 || shape[0] == 0 || shape[1] == 0 || shape[2] == 0) {
        std::string got = "(";
        for (std::size_t i = 0; i < image_header.shape.size(); ++i) {
            got += (i != 0 ? ", " : "") + std::to_string(image_header.shape[i]);
        }
        got += ")";
        throw std::runtime_error(images_path + ": unsupported 'shape' " + got +
                                 " (need (N, H, W) or (N, H, W, 1))");
    }
    const std::size_t count = shape[0];
    const std::size_t height = shape[1];
    const std::size_t width = shape[2];
    const std::size_t payload = element_count(image_header);
    if (image_header.data_offset + payload > image_bytes.size()) {
        throw std::runtime_error(images_path + ": truncated npy payload");
    }

    const NpyHeader label_header = parse_npy_header(label_bytes, labels_path);
    if (label_header.fortran_order) {
        throw std::runtime_error(labels_path +
                                 ": unsupported layout: 'fortran_order' must be False");
    }
    if (label_header.shape.size() != 1) {
        throw std::runtime_error(labels_path + ": unsupported 'shape' for labels (need (N,))");
    }
    if (label_header.shape[0] != count) {
        throw std::runtime_error("image/label count mismatch: " + images_path + " has " +
                                 std::to_string(count) + ", " + labels_path + " has " +
                                 std::to_string(label_header.shape[0]));
    }

    LabeledDataset ds;
    ds.name = images_path;
    ds.width = static_cast<std::uint32_t>(width);
    ds.height = static_cast<std::uint32_t>(height);
    ds.labels.resize(count);
    if (is_u8_descr(label_header.descr)) {
        if (label_header.data_offset + count > label_bytes.size()) {
            throw std::runtime_error(labels_path + ": truncated npy payload");
        }
        std::copy(label_bytes.begin() + static_cast<std::ptrdiff_t>(label_header.data_offset),
                  label_bytes.begin() + static_cast<std::ptrdiff_t>(label_header.data_offset + count),
                  ds.labels.begin());
    } else if (label_header.descr == "<i8") {
        // Common in published corruption benchmarks; values still fit a byte.
        if (label_header.data_offset + count * 8 > label_bytes.size()) {
            throw std::runtime_error(labels_path + ": truncated npy payload");
        }
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t v = 0;
            for (int b = 0; b < 8; ++b) {
                v |= static_cast<std::uint64_t>(
                         label_bytes[label_header.data_offset + i * 8 + b])
                     << (8 * b);
            }
            if (v > 255) {
                throw std::runtime_error(labels_path + ": label value " + std::to_string(v) +
                                         " does not fit a byte");
            }
            ds.labels[i] = static_cast<std::uint8_t>(v);
        }
    } else {
        throw std::runtime_error(labels_path + ": unsupported 'descr' " + label_header.descr +
                                 " for labels (need u1 or <i8)");
    }

    ds.images.reserve(count);
    const std::size_t pixels_per_image = height * width;
    for (std::size_t i = 0; i < count; ++i) {
        Image img;
        img.width = ds.width;
        img.height = ds.height;
        const std::size_t offset = image_header.data_offset + i * pixels_per_image;
        img.pixels.assign(image_bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                          image_bytes.begin() + static_cast<std::ptrdiff_t>(offset + pixels_per_image));
        ds.images.push_back(std::move(img));
    }
    check_labels(ds, labels_path);
    return ds;
}

std::vector<std::size_t> FoldPlan::indices_in(std::uint32_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> FoldPlan::indices_not_in(std::uint32_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

FoldPlan make_folds(const LabeledDataset& ds, std::uint32_t fold_count, std::uint64_t seed) {
    if (fold_count == 0) {
        throw std::invalid_argument("make_folds: fold count must be positive");
    }
    if (ds.size() < fold_count) {
        throw std::invalid_argument("make_folds: fold count " + std::to_string(fold_count) +
                                    " exceeds dataset size " + std::to_string(ds.size()));
    }
    FoldPlan plan;
    plan.fold_count = fold_count;
    plan.seed = seed;
    plan.assignments.resize(ds.size());
    RandomSource rng(seed);
    const auto order = shuffled_indices(static_cast<std::uint32_t>(ds.size()), rng);
    for (std::size_t i = 0; i < order.size(); ++i) {
        plan.assignments[order[i]] = static_cast<std::uint32_t>(i % fold_count);
    }
    return plan;
}

LabeledDataset subset_per_class(const LabeledDataset& ds, std::uint32_t per_class,
                                std::uint64_t seed) {
    if (per_class == 0) {
        return ds;
    }
    RandomSource rng(seed);
    const auto order = shuffled_indices(static_cast<std::uint32_t>(ds.size()), rng);
    std::vector<std::uint32_t> taken(ds.class_count, 0);
    LabeledDataset out;
    out.name = ds.name;
    out.width = ds.width;
    out.height = ds.height;
    out.class_count = ds.class_count;
    for (std::uint32_t index : order) {
        const std::uint8_t label = ds.labels[index];
        if (taken[label] < per_class) {
            ++taken[label];
            out.images.push_back(ds.images[index]);
            out.labels.push_back(label);
        }
    }
    return out;
}

} // namespace hdc
