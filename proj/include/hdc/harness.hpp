#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdc/classifier.hpp"
#include "hdc/dataset.hpp"
#include "hdc/encoder.hpp"

namespace hdc {

/// Stream indices hung off the root seed. Every run, fold, and sample gets
/// its own child stream, so results never depend on evaluation order or
/// worker scheduling.
namespace streams {
constexpr std::uint64_t kMemories = 1;
constexpr std::uint64_t kSampleTies = 2;
constexpr std::uint64_t kTraining = 3;
constexpr std::uint64_t kFolds = 4;
constexpr std::uint64_t kRun = 5;
constexpr std::uint64_t kConfig = 6;
constexpr std::uint64_t kSubset = 7;
} // namespace streams

struct ExperimentSpec {
    EncoderConfig encoder; // splits/patch_size give the single-config values
    std::vector<std::uint32_t> sweep_splits;      // sweep mode: S values
    std::vector<std::uint32_t> sweep_patch_sizes; // sweep mode: z values (poi only)
    std::uint64_t seed = 1;
    std::uint32_t runs = 10;
    std::uint32_t folds = 10;
    std::uint32_t subset_per_class = 0;      // training subset; 0 = full dataset
    std::uint32_t subset_test_per_class = 0; // evaluation subset; 0 = full dataset
    TrainingOptions training;
};

struct RunMetrics {
    std::uint32_t index = 0; // run or fold number
    double train_accuracy = 0.0;
    double eval_accuracy = 0.0;
    std::uint32_t iterations_to_best = 0;
    std::uint32_t iterations_run = 0;
    bool stopped_early = false;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for a single value
};

Aggregate aggregate_of(const std::vector<double>& values);

struct MetricsRecord {
    nlohmann::ordered_json config;
    std::string mode; // "cv", "test", ...
    std::vector<RunMetrics> entries;
    Aggregate train_accuracy;
    Aggregate eval_accuracy;
    Aggregate iterations;

    /// Recomputes the aggregates from the per-entry fields.
    void finalize();
    nlohmann::ordered_json to_json() const;
};

/// Builds encoder memories from derive(seed, kMemories) and encodes every
/// image, resolving each sample's majority ties from its own child stream
/// derive(seed, {kSampleTies, index}).
std::vector<Hypervector> encode_dataset(const LabeledDataset& ds, const EncoderConfig& config,
                                        std::uint64_t seed);

/// Ten-fold (configurable) cross validation of a single encoder config:
/// encodes once, then trains on k-1 folds and validates on the held-out
/// fold. Entry index f used fold f for validation.
MetricsRecord run_cv(const ExperimentSpec& spec, const LabeledDataset& train);

struct SweepOutcome {
    std::vector<MetricsRecord> records;
    std::vector<std::string> skipped; // human-readable reasons for invalid combos
    std::size_t best_index = 0;       // highest mean validation accuracy
};

/// Cross-validates every (splits, patch size) combination; invalid
/// combinations are skipped with a recorded reason. Results do not depend on
/// the order in which combinations are listed.
SweepOutcome run_cv_sweep(const ExperimentSpec& spec, const LabeledDataset& train);

/// Independently seeded train-plus-test runs; entry r uses run seed
/// derive(seed, {kRun, r}). When final_model is given it receives the model
/// of the last run.
MetricsRecord run_test(const ExperimentSpec& spec, const LabeledDataset& train,
                       const LabeledDataset& test, ClassifierModel* final_model = nullptr);

struct CorruptionSpec {
    std::string name;
    std::string images_path;
    std::string labels_path;
    bool idx_format = false; // npy pair by default; true for an idx pair
};

/// Trains per run on the clean training set and evaluates each corrupted
/// test set with that run's model. A corruption whose files fail to load is
/// reported with its error and the rest proceed. The trailing "average"
/// block aggregates across corruptions (the clean "none" set is excluded).
nlohmann::ordered_json run_robustness(const ExperimentSpec& spec, const LabeledDataset& train,
                                      const std::vector<CorruptionSpec>& corruptions);

struct FigureOptions {
    std::string out_dir;
    std::uint32_t dim = 10000;
    std::uint64_t seed = 1;
    std::uint32_t image_side = 28;
    std::uint32_t anchor_x = 21;
    std::uint32_t anchor_y = 11;
    std::uint32_t position_splits = 9; // local linear grid
    std::uint32_t concat_edges = 10;   // concatenation grid
    std::uint32_t profile_levels = 21; // level profile files
    std::uint32_t profile_splits = 4;  // local linear profile
    bool write_pgm = false;
};

/// Writes the level-profile CSVs (linear and local linear mappings) and the
/// four 2D position-similarity grids (orthogonal, linear, concatenation,
/// local linear) as CSV, optionally also as PGM. Returns the written paths.
std::vector<std::string> emit_similarity_figures(const FigureOptions& options);

/// Pairwise similarity matrix of an item memory as CSV.
void write_similarity_matrix_csv(const ItemMemory& memory, const std::string& path);

/// Container for encoded sample vectors (magic HDCVECS1): dim, count, seed,
/// then one label byte plus packed bits per sample.
void write_encoded_vectors(const std::string& path, const std::vector<Hypervector>& vectors,
                           const std::vector<std::uint8_t>& labels, std::uint64_t seed);
struct EncodedVectors {
    std::uint32_t dim = 0;
    std::uint64_t seed = 0;
    std::vector<Hypervector> vectors;
    std::vector<std::uint8_t> labels;
};
EncodedVectors read_encoded_vectors(const std::string& path);

} // namespace hdc
