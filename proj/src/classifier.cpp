#include "hdc/classifier.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace hdc {

namespace {

constexpr char kModelMagic[8] = {'H', 'D', 'C', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kModelVersion = 1;

void check_training_input(const std::vector<Hypervector>& samples,
                          const std::vector<std::uint32_t>& labels, std::size_t class_count,
                          std::uint32_t dim) {
    if (samples.size() != labels.size()) {
        throw std::invalid_argument("classifier: sample and label counts differ");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].dim() != dim) {
            throw std::invalid_argument("classifier: sample dimension mismatch");
        }
        if (labels[i] >= class_count) {
            throw std::invalid_argument("classifier: unknown label index " +
                                        std::to_string(labels[i]));
        }
    }
}

void write_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes, 8);
}

std::uint32_t read_u32(std::istream& in, const char* section) {
    char bytes[4];
    if (!in.read(bytes, 4)) {
        throw std::runtime_error(std::string("model file truncated in ") + section);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    return v;
}

std::uint64_t read_u64(std::istream& in, const char* section) {
    char bytes[8];
    if (!in.read(bytes, 8)) {
        throw std::runtime_error(std::string("model file truncated in ") + section);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    return v;
}

} // namespace

ClassifierModel::ClassifierModel(std::vector<std::string> labels, std::uint32_t dim,
                                 std::uint64_t tie_seed)
    : labels_(std::move(labels)), dim_(dim), tie_seed_(tie_seed) {
    if (labels_.empty()) {
        throw std::invalid_argument("classifier: label set must be non-empty");
    }
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw std::invalid_argument("classifier: label set contains duplicates");
    }
    bundles_.assign(labels_.size(), Bundle(dim));
    prototypes_.assign(labels_.size(), Hypervector(dim));
}

ClassifierModel ClassifierModel::train_initial(const std::vector<Hypervector>& samples,
                                               const std::vector<std::uint32_t>& labels,
                                               std::vector<std::string> label_names,
                                               std::uint32_t dim, std::uint64_t tie_seed) {
    ClassifierModel model(std::move(label_names), dim, tie_seed);
    check_training_input(samples, labels, model.labels_.size(), dim);
    std::vector<std::uint32_t> per_class(model.labels_.size(), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        model.bundles_[labels[i]].add(samples[i]);
        ++per_class[labels[i]];
    }
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        if (per_class[c] == 0) {
            throw std::invalid_argument("classifier: class '" + model.labels_[c] +
                                        "' received no training samples");
        }
    }
    RandomSource ties = RandomSource(tie_seed).child(0);
    model.refresh_prototypes(ties);
    return model;
}

void ClassifierModel::refresh_prototypes(RandomSource& rng) {
    for (std::size_t c = 0; c < bundles_.size(); ++c) {
        prototypes_[c] = bundles_[c].binarize(rng);
    }
}

std::uint32_t ClassifierModel::predict(const Hypervector& sample) const {
    if (sample.dim() != dim_) {
        throw std::invalid_argument("classifier: sample dimension mismatch");
    }
    std::uint32_t best = 0;
    std::uint32_t best_distance = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t c = 0; c < prototypes_.size(); ++c) {
        const std::uint32_t distance = hamming(prototypes_[c], sample);
        if (distance < best_distance) {
            best_distance = distance;
            best = c;
        }
    }
    return best;
}

TrainingReport ClassifierModel::retrain(const std::vector<Hypervector>& samples,
                                        const std::vector<std::uint32_t>& labels,
                                        const TrainingOptions& options) {
    check_training_input(samples, labels, labels_.size(), dim_);
    if (samples.empty()) {
        throw std::invalid_argument("classifier: retrain needs at least one sample");
    }
    if (options.max_iterations == 0 || options.check_interval == 0) {
        throw std::invalid_argument("classifier: max_iterations and check_interval must be positive");
    }
    TrainingReport report;
    double best = -1.0;
    std::vector<Bundle> best_bundles;
    std::vector<Hypervector> best_prototypes;
    RandomSource tie_root(tie_seed_);

    std::vector<std::pair<std::size_t, std::uint32_t>> misses; // sample index, predicted class
    for (std::uint32_t iteration = 1; iteration <= options.max_iterations; ++iteration) {
        report.iterations_run = iteration;
        misses.clear();
        std::size_t correct = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const std::uint32_t predicted = predict(samples[i]);
            if (predicted == labels[i]) {
                ++correct;
            } else {
                misses.emplace_back(i, predicted);
            }
        }
        const double accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
        report.accuracy_trace.push_back(accuracy);
        if (accuracy > best) {
            // Snapshot taken before this iteration's updates: exactly the
            // state that produced the measured accuracy.
            best = accuracy;
            report.best_iteration = iteration;
            best_bundles = bundles_;
            best_prototypes = prototypes_;
        }
        for (const auto& [index, predicted] : misses) {
            bundles_[labels[index]].add(samples[index]);
            // subtract, not remove: the sample was never bundled into the
            // wrongly predicted class, so counts there may go negative.
            bundles_[predicted].subtract(samples[index]);
        }
        RandomSource ties = tie_root.child(iteration);
        refresh_prototypes(ties);
        if (iteration % options.check_interval == 0 && best > options.stop_threshold) {
            report.stopped_early = iteration < options.max_iterations;
            break;
        }
    }
    bundles_ = std::move(best_bundles);
    prototypes_ = std::move(best_prototypes);
    report.best_train_accuracy = best;
    return report;
}

double ClassifierModel::evaluate(const std::vector<Hypervector>& samples,
                                 const std::vector<std::uint32_t>& labels) const {
    if (samples.empty()) {
        throw std::invalid_argument("classifier: evaluation set is empty");
    }
    if (samples.size() != labels.size()) {
        throw std::invalid_argument("classifier: sample and label counts differ");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (predict(samples[i]) == labels[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

void ClassifierModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open model file for writing: " + path);
    }
    out.write(kModelMagic, sizeof(kModelMagic));
    write_u32(out, kModelVersion);
    write_u32(out, dim_);
    write_u64(out, tie_seed_);
    write_u32(out, static_cast<std::uint32_t>(labels_.size()));
    for (const auto& label : labels_) {
        write_u32(out, static_cast<std::uint32_t>(label.size()));
        out.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    for (const auto& bundle : bundles_) {
        write_u32(out, bundle.size());
        for (std::int32_t count : bundle.counts()) {
            write_u32(out, static_cast<std::uint32_t>(count));
        }
    }
    const std::size_t proto_bytes = (dim_ + 7) / 8;
    for (const auto& prototype : prototypes_) {
        const auto& words = prototype.words();
        for (std::size_t b = 0; b < proto_bytes; ++b) {
            const char byte =
                static_cast<char>((words[b / 8] >> ((b % 8) * 8)) & 0xFF);
            out.put(byte);
        }
    }
    if (!out) {
        throw std::runtime_error("failed writing model file: " + path);
    }
}

ClassifierModel ClassifierModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path);
    }
    char magic[sizeof(kModelMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("not a model file (bad magic): " + path);
    }
    const std::uint32_t version = read_u32(in, "header");
    if (version != kModelVersion) {
        throw std::runtime_error("unsupported model file version " + std::to_string(version) +
                                 " (expected " + std::to_string(kModelVersion) + ")");
    }
    const std::uint32_t dim = read_u32(in, "header");
    const std::uint64_t tie_seed = read_u64(in, "header");
    const std::uint32_t class_count = read_u32(in, "label table");
    if (dim == 0 || class_count == 0) {
        throw std::runtime_error("model file declares an empty model: " + path);
    }
    std::vector<std::string> labels(class_count);
    for (auto& label : labels) {
        const std::uint32_t len = read_u32(in, "label table");
        label.resize(len);
        if (len > 0 && !in.read(label.data(), len)) {
            throw std::runtime_error("model file truncated in label table");
        }
    }
    ClassifierModel model(std::move(labels), dim, tie_seed);
    for (auto& bundle : model.bundles_) {
        const std::uint32_t n = read_u32(in, "bundle counts");
        std::vector<std::int32_t> counts(dim);
        for (std::uint32_t d = 0; d < dim; ++d) {
            counts[d] = static_cast<std::int32_t>(read_u32(in, "bundle counts"));
        }
        bundle.restore(std::move(counts), n);
    }
    const std::size_t proto_bytes = (dim + 7) / 8;
    for (auto& prototype : model.prototypes_) {
        Hypervector v(dim);
        auto& words = v.words_mut();
        for (std::size_t b = 0; b < proto_bytes; ++b) {
            const int byte = in.get();
            if (byte == std::char_traits<char>::eof()) {
                throw std::runtime_error("model file truncated in prototypes");
            }
            words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(byte))
                            << ((b % 8) * 8);
        }
        v.mask_tail();
        prototype = std::move(v);
    }
    return model;
}

} // namespace hdc
