#include "hdc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>

namespace hdc {

namespace {

std::vector<std::string> default_label_names(std::uint32_t class_count) {
    std::vector<std::string> names(class_count);
    for (std::uint32_t c = 0; c < class_count; ++c) {
        names[c] = std::to_string(c);
    }
    return names;
}

std::vector<std::uint32_t> labels_as_u32(const std::vector<std::uint8_t>& labels) {
    return {labels.begin(), labels.end()};
}

nlohmann::ordered_json config_json(const ExperimentSpec& spec, const std::string& dataset_name,
                                   std::uint32_t splits, std::uint32_t patch_size) {
    nlohmann::ordered_json j;
    j["dataset"] = dataset_name;
    j["encoder"] = to_string(spec.encoder.kind);
    j["dim"] = spec.encoder.dim;
    j["threshold"] = spec.encoder.threshold;
    j["splits"] = splits;
    if (spec.encoder.kind == EncoderKind::poi) {
        j["patch_size"] = patch_size;
        j["patch_mapping"] = to_string(spec.encoder.patch_mapping);
    }
    j["seed"] = spec.seed;
    j["runs"] = spec.runs;
    j["folds"] = spec.folds;
    j["subset_per_class"] = spec.subset_per_class;
    j["max_iterations"] = spec.training.max_iterations;
    j["check_interval"] = spec.training.check_interval;
    j["stop_threshold"] = spec.training.stop_threshold;
    return j;
}

void append_entry(MetricsRecord& record, std::uint32_t index, const TrainingReport& report,
                  double eval_accuracy) {
    RunMetrics m;
    m.index = index;
    m.train_accuracy = report.best_train_accuracy;
    m.eval_accuracy = eval_accuracy;
    m.iterations_to_best = report.best_iteration;
    m.iterations_run = report.iterations_run;
    m.stopped_early = report.stopped_early;
    record.entries.push_back(m);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_grid_csv(const std::string& path, const std::vector<std::vector<double>>& grid) {
    std::string text;
    for (const auto& row : grid) {
        for (std::size_t x = 0; x < row.size(); ++x) {
            if (x != 0) {
                text += ',';
            }
            text += format_double(row[x]);
        }
        text += '\n';
    }
    write_text_file(path, text);
}

void write_grid_pgm(const std::string& path, const std::vector<std::vector<double>>& grid) {
    std::string text = "P2\n" + std::to_string(grid.front().size()) + " " +
                       std::to_string(grid.size()) + "\n255\n";
    for (const auto& row : grid) {
        for (std::size_t x = 0; x < row.size(); ++x) {
            const double clamped = std::clamp(row[x], 0.0, 1.0);
            if (x != 0) {
                text += ' ';
            }
            text += std::to_string(static_cast<int>(std::lround(clamped * 255.0)));
        }
        text += '\n';
    }
    write_text_file(path, text);
}

// Similarity of every pixel's bound position vector to the anchor's.
std::vector<std::vector<double>> position_similarity_grid(const ItemMemory& pos_x,
                                                          const ItemMemory& pos_y,
                                                          std::uint32_t anchor_x,
                                                          std::uint32_t anchor_y) {
    const Hypervector anchor = bind(pos_x.at(anchor_x), pos_y.at(anchor_y));
    std::vector<std::vector<double>> grid(pos_y.size(), std::vector<double>(pos_x.size(), 0.0));
    for (std::size_t y = 0; y < pos_y.size(); ++y) {
        for (std::size_t x = 0; x < pos_x.size(); ++x) {
            grid[y][x] = similarity(anchor, bind(pos_x[x], pos_y[y]));
        }
    }
    return grid;
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes, 4);
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(bytes, 8);
}

} // namespace

Aggregate aggregate_of(const std::vector<double>& values) {
    Aggregate agg;
    if (values.empty()) {
        return agg;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    agg.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
            sq += (v - agg.mean) * (v - agg.mean);
        }
        agg.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return agg;
}

void MetricsRecord::finalize() {
    std::vector<double> train, eval, iters;
    for (const auto& e : entries) {
        train.push_back(e.train_accuracy);
        eval.push_back(e.eval_accuracy);
        iters.push_back(static_cast<double>(e.iterations_to_best));
    }
    train_accuracy = aggregate_of(train);
    eval_accuracy = aggregate_of(eval);
    iterations = aggregate_of(iters);
}

nlohmann::ordered_json MetricsRecord::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = mode;
    j["config"] = config;
    nlohmann::ordered_json entries_json = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json entry;
        entry["index"] = e.index;
        entry["train_accuracy"] = e.train_accuracy;
        entry["eval_accuracy"] = e.eval_accuracy;
        entry["iterations_to_best"] = e.iterations_to_best;
        entry["iterations_run"] = e.iterations_run;
        entry["stopped_early"] = e.stopped_early;
        entries_json.push_back(entry);
    }
    j["entries"] = entries_json;
    nlohmann::ordered_json agg;
    agg["train_accuracy"] = {{"mean", train_accuracy.mean}, {"stddev", train_accuracy.stddev}};
    agg["eval_accuracy"] = {{"mean", eval_accuracy.mean}, {"stddev", eval_accuracy.stddev}};
    agg["iterations_to_best"] = {{"mean", iterations.mean}, {"stddev", iterations.stddev}};
    j["aggregate"] = agg;
    return j;
}

std::vector<Hypervector> encode_dataset(const LabeledDataset& ds, const EncoderConfig& config,
                                        std::uint64_t seed) {
    RandomSource memory_rng(derive_seed(seed, {streams::kMemories}));
    ImageEncoder encoder(config, ds.width, ds.height, memory_rng);
    std::vector<Hypervector> encodings;
    encodings.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        RandomSource ties(derive_seed(seed, {streams::kSampleTies, i}));
        encodings.push_back(encoder.encode(ds.images[i], ties));
    }
    return encodings;
}

MetricsRecord run_cv(const ExperimentSpec& spec, const LabeledDataset& train) {
    const LabeledDataset ds =
        subset_per_class(train, spec.subset_per_class, derive_seed(spec.seed, {streams::kSubset}));
    const std::uint64_t config_seed = derive_seed(
        spec.seed, {streams::kConfig, spec.encoder.splits, spec.encoder.patch_size});
    const auto encodings = encode_dataset(ds, spec.encoder, config_seed);
    const auto labels = labels_as_u32(ds.labels);
    const auto names = default_label_names(ds.class_count);

    MetricsRecord record;
    record.mode = "cv";
    record.config = config_json(spec, ds.name, spec.encoder.splits, spec.encoder.patch_size);
    record.config["samples"] = ds.size();

    const FoldPlan plan = make_folds(ds, spec.folds, derive_seed(spec.seed, {streams::kFolds}));
    for (std::uint32_t fold = 0; fold < spec.folds; ++fold) {
        const auto train_idx = plan.indices_not_in(fold);
        const auto val_idx = plan.indices_in(fold);
        std::vector<Hypervector> fold_samples;
        std::vector<std::uint32_t> fold_labels;
        fold_samples.reserve(train_idx.size());
        fold_labels.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            fold_samples.push_back(encodings[i]);
            fold_labels.push_back(labels[i]);
        }
        ClassifierModel model = ClassifierModel::train_initial(
            fold_samples, fold_labels, names, spec.encoder.dim,
            derive_seed(spec.seed, {streams::kTraining, fold}));
        const TrainingReport report = model.retrain(fold_samples, fold_labels, spec.training);

        std::vector<Hypervector> val_samples;
        std::vector<std::uint32_t> val_labels;
        val_samples.reserve(val_idx.size());
        val_labels.reserve(val_idx.size());
        for (std::size_t i : val_idx) {
            val_samples.push_back(encodings[i]);
            val_labels.push_back(labels[i]);
        }
        append_entry(record, fold, report, model.evaluate(val_samples, val_labels));
    }
    record.finalize();
    return record;
}

SweepOutcome run_cv_sweep(const ExperimentSpec& spec, const LabeledDataset& train) {
    SweepOutcome outcome;
    std::vector<std::uint32_t> patch_sizes = spec.sweep_patch_sizes;
    if (spec.encoder.kind != EncoderKind::poi || patch_sizes.empty()) {
        patch_sizes = {spec.encoder.patch_size};
    }
    std::vector<std::uint32_t> splits = spec.sweep_splits;
    if (splits.empty()) {
        splits = {spec.encoder.splits};
    }
    for (std::uint32_t s : splits) {
        for (std::uint32_t z : patch_sizes) {
            ExperimentSpec combo = spec;
            combo.encoder.splits = s;
            combo.encoder.patch_size = z;
            try {
                combo.encoder.validate(train.width, train.height);
            } catch (const std::exception& e) {
                outcome.skipped.push_back("skipped S=" + std::to_string(s) + " z=" +
                                          std::to_string(z) + ": " + e.what());
                continue;
            }
            outcome.records.push_back(run_cv(combo, train));
        }
    }
    for (std::size_t i = 0; i < outcome.records.size(); ++i) {
        if (outcome.records[i].eval_accuracy.mean >
            outcome.records[outcome.best_index].eval_accuracy.mean) {
            outcome.best_index = i;
        }
    }
    return outcome;
}

MetricsRecord run_test(const ExperimentSpec& spec, const LabeledDataset& train,
                       const LabeledDataset& test, ClassifierModel* final_model) {
    const LabeledDataset train_ds =
        subset_per_class(train, spec.subset_per_class, derive_seed(spec.seed, {streams::kSubset}));
    const LabeledDataset test_ds = subset_per_class(
        test, spec.subset_test_per_class, derive_seed(spec.seed, {streams::kSubset, 1}));
    const auto train_labels = labels_as_u32(train_ds.labels);
    const auto test_labels = labels_as_u32(test_ds.labels);
    const auto names = default_label_names(train_ds.class_count);

    MetricsRecord record;
    record.mode = "test";
    record.config = config_json(spec, train_ds.name, spec.encoder.splits, spec.encoder.patch_size);
    record.config["train_samples"] = train_ds.size();
    record.config["test_samples"] = test_ds.size();
    record.config["subset_test_per_class"] = spec.subset_test_per_class;

    for (std::uint32_t run = 0; run < spec.runs; ++run) {
        const std::uint64_t run_seed = derive_seed(spec.seed, {streams::kRun, run});
        const auto train_enc = encode_dataset(train_ds, spec.encoder, run_seed);
        const auto test_enc = encode_dataset(test_ds, spec.encoder, run_seed);
        ClassifierModel model = ClassifierModel::train_initial(
            train_enc, train_labels, names, spec.encoder.dim,
            derive_seed(run_seed, {streams::kTraining}));
        const TrainingReport report = model.retrain(train_enc, train_labels, spec.training);
        append_entry(record, run, report, model.evaluate(test_enc, test_labels));
        if (final_model != nullptr && run + 1 == spec.runs) {
            *final_model = std::move(model);
        }
    }
    record.finalize();
    return record;
}

nlohmann::ordered_json run_robustness(const ExperimentSpec& spec, const LabeledDataset& train,
                                      const std::vector<CorruptionSpec>& corruptions) {
    const LabeledDataset train_ds =
        subset_per_class(train, spec.subset_per_class, derive_seed(spec.seed, {streams::kSubset}));
    const auto train_labels = labels_as_u32(train_ds.labels);
    const auto names = default_label_names(train_ds.class_count);

    struct LoadedCorruption {
        CorruptionSpec spec;
        std::optional<LabeledDataset> data;
        std::string error;
        std::vector<double> accuracies;
    };
    std::vector<LoadedCorruption> loaded;
    for (const auto& c : corruptions) {
        LoadedCorruption lc;
        lc.spec = c;
        try {
            LabeledDataset ds = c.idx_format ? load_idx(c.images_path, c.labels_path)
                                             : load_npy_u8(c.images_path, c.labels_path);
            lc.data = subset_per_class(ds, spec.subset_test_per_class,
                                       derive_seed(spec.seed, {streams::kSubset, 1}));
        } catch (const std::exception& e) {
            lc.error = e.what();
        }
        loaded.push_back(std::move(lc));
    }

    std::vector<double> train_accuracies;
    std::vector<double> iterations;
    for (std::uint32_t run = 0; run < spec.runs; ++run) {
        const std::uint64_t run_seed = derive_seed(spec.seed, {streams::kRun, run});
        const auto train_enc = encode_dataset(train_ds, spec.encoder, run_seed);
        ClassifierModel model = ClassifierModel::train_initial(
            train_enc, train_labels, names, spec.encoder.dim,
            derive_seed(run_seed, {streams::kTraining}));
        const TrainingReport report = model.retrain(train_enc, train_labels, spec.training);
        train_accuracies.push_back(report.best_train_accuracy);
        iterations.push_back(report.best_iteration);
        for (auto& lc : loaded) {
            if (!lc.data) {
                continue;
            }
            const auto test_enc = encode_dataset(*lc.data, spec.encoder, run_seed);
            lc.accuracies.push_back(model.evaluate(test_enc, labels_as_u32(lc.data->labels)));
        }
    }

    nlohmann::ordered_json out;
    out["mode"] = "robustness";
    out["config"] = config_json(spec, train_ds.name, spec.encoder.splits, spec.encoder.patch_size);
    out["config"]["train_samples"] = train_ds.size();
    out["config"]["subset_test_per_class"] = spec.subset_test_per_class;
    const Aggregate train_agg = aggregate_of(train_accuracies);
    const Aggregate iter_agg = aggregate_of(iterations);
    out["training"] = {{"accuracy", {{"mean", train_agg.mean}, {"stddev", train_agg.stddev}}},
                       {"iterations_to_best",
                        {{"mean", iter_agg.mean}, {"stddev", iter_agg.stddev}}}};

    nlohmann::ordered_json per_corruption = nlohmann::ordered_json::array();
    std::vector<double> corruption_means;
    for (const auto& lc : loaded) {
        nlohmann::ordered_json cj;
        cj["corruption"] = lc.spec.name;
        if (!lc.data) {
            cj["error"] = lc.error;
        } else {
            cj["test_samples"] = lc.data->size();
            cj["accuracies"] = lc.accuracies;
            const Aggregate agg = aggregate_of(lc.accuracies);
            cj["accuracy"] = {{"mean", agg.mean}, {"stddev", agg.stddev}};
            if (lc.spec.name != "none") {
                corruption_means.push_back(agg.mean);
            }
        }
        per_corruption.push_back(cj);
    }
    out["corruptions"] = per_corruption;
    const Aggregate avg = aggregate_of(corruption_means);
    out["average"] = {{"corruption_count", corruption_means.size()},
                      {"accuracy", {{"mean", avg.mean}, {"stddev", avg.stddev}}}};
    return out;
}

std::vector<std::string> emit_similarity_figures(const FigureOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    std::vector<std::string> written;

    const auto path_of = [&](const std::string& name) {
        return (fs::path(options.out_dir) / name).string();
    };

    // Level profiles for the two one-dimensional mappings.
    {
        RandomSource rng(derive_seed(options.seed, {1}));
        const ItemMemory linear = build_linear(rng, options.profile_levels, options.dim);
        std::string text = "level,anchor_low,anchor_mid\n";
        const auto low = linear.similarity_profile(0);
        const auto mid = linear.similarity_profile(options.profile_levels / 3);
        for (std::size_t k = 0; k < linear.size(); ++k) {
            text += std::to_string(k) + "," + format_double(low[k]) + "," +
                    format_double(mid[k]) + "\n";
        }
        const std::string p = path_of("level_profile_linear.csv");
        write_text_file(p, text);
        written.push_back(p);
    }
    {
        RandomSource rng(derive_seed(options.seed, {2}));
        const ItemMemory local = build_local_linear(rng, options.profile_levels,
                                                    options.profile_splits, options.dim);
        // One profile column per split edge.
        std::vector<std::size_t> anchors;
        const std::uint32_t steps = options.profile_levels - 1;
        for (std::uint32_t s = 0; s <= options.profile_splits; ++s) {
            anchors.push_back(s * steps / options.profile_splits);
        }
        std::string text = "level";
        for (std::size_t a : anchors) {
            text += ",anchor_" + std::to_string(a);
        }
        text += "\n";
        std::vector<std::vector<double>> profiles;
        for (std::size_t a : anchors) {
            profiles.push_back(local.similarity_profile(a));
        }
        for (std::size_t k = 0; k < local.size(); ++k) {
            text += std::to_string(k);
            for (const auto& profile : profiles) {
                text += "," + format_double(profile[k]);
            }
            text += "\n";
        }
        const std::string p = path_of("level_profile_local_linear.csv");
        write_text_file(p, text);
        written.push_back(p);
    }

    // 2D position-similarity grids for the four mappings.
    const std::uint32_t side = options.image_side;
    if (options.anchor_x >= side || options.anchor_y >= side) {
        throw std::invalid_argument("figure anchor lies outside the image");
    }
    struct GridSpec {
        std::string name;
        std::uint64_t stream;
    };
    const std::vector<GridSpec> grids = {
        {"orthogonal", 10}, {"linear", 11}, {"concatenation", 12}, {"local_linear", 13}};
    for (const auto& g : grids) {
        RandomSource rng(derive_seed(options.seed, {g.stream}));
        std::optional<ItemMemory> pos_x, pos_y;
        if (g.name == "orthogonal") {
            pos_x = build_orthogonal(rng, side, options.dim);
            pos_y = build_orthogonal(rng, side, options.dim);
        } else if (g.name == "linear") {
            pos_x = build_linear(rng, side, options.dim);
            pos_y = build_linear(rng, side, options.dim);
        } else if (g.name == "concatenation") {
            pos_x = build_concatenation(rng, side, options.concat_edges, options.dim);
            pos_y = build_concatenation(rng, side, options.concat_edges, options.dim);
        } else {
            pos_x = build_local_linear(rng, side, options.position_splits, options.dim);
            pos_y = build_local_linear(rng, side, options.position_splits, options.dim);
        }
        const auto grid =
            position_similarity_grid(*pos_x, *pos_y, options.anchor_x, options.anchor_y);
        const std::string csv = path_of("position_similarity_" + g.name + ".csv");
        write_grid_csv(csv, grid);
        written.push_back(csv);
        if (options.write_pgm) {
            const std::string pgm = path_of("position_similarity_" + g.name + ".pgm");
            write_grid_pgm(pgm, grid);
            written.push_back(pgm);
        }
    }
    return written;
}

void write_similarity_matrix_csv(const ItemMemory& memory, const std::string& path) {
    std::string text;
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const auto profile = memory.similarity_profile(i);
        for (std::size_t j = 0; j < profile.size(); ++j) {
            if (j != 0) {
                text += ',';
            }
            text += format_double(profile[j]);
        }
        text += '\n';
    }
    write_text_file(path, text);
}

void write_encoded_vectors(const std::string& path, const std::vector<Hypervector>& vectors,
                           const std::vector<std::uint8_t>& labels, std::uint64_t seed) {
    if (vectors.size() != labels.size()) {
        throw std::invalid_argument("encoded vector dump: vector/label counts differ");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out.write("HDCVECS1", 8);
    const std::uint32_t dim = vectors.empty() ? 0 : vectors.front().dim();
    write_u32_le(out, dim);
    write_u64_le(out, vectors.size());
    write_u64_le(out, seed);
    const std::size_t bytes = (static_cast<std::size_t>(dim) + 7) / 8;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        out.put(static_cast<char>(labels[i]));
        const auto& words = vectors[i].words();
        for (std::size_t b = 0; b < bytes; ++b) {
            out.put(static_cast<char>((words[b / 8] >> ((b % 8) * 8)) & 0xFF));
        }
    }
    if (!out) {
        throw std::runtime_error("failed writing encoded vectors: " + path);
    }
}

EncodedVectors read_encoded_vectors(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, "HDCVECS1", 8) != 0) {
        throw std::runtime_error(path + ": not an encoded-vector file (bad magic)");
    }
    const auto read_u32 = [&](const char* what) {
        char b[4];
        if (!in.read(b, 4)) {
            throw std::runtime_error(path + ": truncated in " + what);
        }
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        }
        return v;
    };
    const auto read_u64 = [&](const char* what) {
        char b[8];
        if (!in.read(b, 8)) {
            throw std::runtime_error(path + ": truncated in " + what);
        }
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        }
        return v;
    };
    EncodedVectors out;
    out.dim = read_u32("header");
    const std::uint64_t count = read_u64("header");
    out.seed = read_u64("header");
    const std::size_t bytes = (static_cast<std::size_t>(out.dim) + 7) / 8;
    for (std::uint64_t i = 0; i < count; ++i) {
        const int label = in.get();
        if (label == std::char_traits<char>::eof()) {
            throw std::runtime_error(path + ": truncated in samples");
        }
        out.labels.push_back(static_cast<std::uint8_t>(label));
        Hypervector v(out.dim);
        auto& words = v.words_mut();
        for (std::size_t b = 0; b < bytes; ++b) {
            const int byte = in.get();
            if (byte == std::char_traits<char>::eof()) {
                throw std::runtime_error(path + ": truncated in samples");
            }
            words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(byte))
                            << ((b % 8) * 8);
        }
        v.mask_tail();
        out.vectors.push_back(std::move(v));
    }
    return out;
}

} // namespace hdc
