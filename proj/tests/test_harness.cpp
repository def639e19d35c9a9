#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hdc/harness.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace hdc;

namespace {

struct TempDir {
    std::filesystem::path dir;
    explicit TempDir(const std::string& name) {
        dir = std::filesystem::temp_directory_path() / name;
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

ExperimentSpec toy_spec(EncoderKind kind, std::uint32_t dim = 2048) {
    ExperimentSpec spec;
    spec.encoder.kind = kind;
    spec.encoder.dim = dim;
    spec.encoder.splits = 1;
    spec.encoder.patch_size = 3;
    spec.seed = 7;
    spec.runs = 2;
    spec.folds = 10;
    spec.training.max_iterations = 20;
    spec.training.check_interval = 10;
    return spec;
}

std::vector<std::vector<double>> parse_grid_csv(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<double>> grid;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        grid.push_back(row);
    }
    return grid;
}

} // namespace

TEST_CASE("cross validation produces one entry per fold with consistent aggregates") {
    const LabeledDataset ds = synthetic::toy_dataset(10, 2, 16, 11);
    const MetricsRecord record = run_cv(toy_spec(EncoderKind::pixelwise), ds);
    REQUIRE(record.entries.size() == 10);

    std::vector<double> eval;
    for (const auto& e : record.entries) {
        eval.push_back(e.eval_accuracy);
    }
    const Aggregate recomputed = aggregate_of(eval);
    CHECK(std::abs(recomputed.mean - record.eval_accuracy.mean) < 1e-9);
    CHECK(std::abs(recomputed.stddev - record.eval_accuracy.stddev) < 1e-9);

    // Position-aware encoding separates the toy classes well.
    CHECK(record.eval_accuracy.mean > 0.8);
}

TEST_CASE("sweeps skip invalid combinations and are order-invariant") {
    const LabeledDataset ds = synthetic::toy_dataset(8, 2, 16, 13);

    ExperimentSpec spec = toy_spec(EncoderKind::pixelwise);
    spec.sweep_splits = {1, 9, 33}; // 33 exceeds the 16-pixel side
    SweepOutcome outcome = run_cv_sweep(spec, ds);
    CHECK(outcome.records.size() == 2);
    REQUIRE(outcome.skipped.size() == 1);
    CHECK(outcome.skipped[0].find("S=33") != std::string::npos);

    ExperimentSpec reversed = spec;
    reversed.sweep_splits = {9, 1, 33};
    SweepOutcome outcome2 = run_cv_sweep(reversed, ds);
    REQUIRE(outcome2.records.size() == 2);
    // Match combos by config; dumps must be bit-identical.
    for (const auto& record : outcome.records) {
        bool found = false;
        for (const auto& other : outcome2.records) {
            if (other.config == record.config) {
                CHECK(other.to_json().dump() == record.to_json().dump());
                found = true;
            }
        }
        CHECK(found);
    }
    CHECK(outcome.records[outcome.best_index].eval_accuracy.mean ==
          outcome2.records[outcome2.best_index].eval_accuracy.mean);
}

TEST_CASE("test runs are deterministic and honor subset selection") {
    const LabeledDataset train = synthetic::toy_dataset(12, 3, 16, 17);
    const LabeledDataset test = synthetic::toy_dataset(6, 3, 16, 18);

    ExperimentSpec spec = toy_spec(EncoderKind::poi);
    spec.encoder.splits = 4;
    spec.subset_per_class = 8;
    spec.subset_test_per_class = 4;

    const MetricsRecord a = run_test(spec, train, test);
    const MetricsRecord b = run_test(spec, train, test);
    CHECK(a.to_json().dump() == b.to_json().dump());
    REQUIRE(a.entries.size() == 2);
    CHECK(a.config["train_samples"] == 24);
    CHECK(a.config["test_samples"] == 12);

    ExperimentSpec one_run = spec;
    one_run.runs = 1;
    const MetricsRecord single = run_test(one_run, train, test);
    CHECK(single.eval_accuracy.stddev == 0.0);
}

TEST_CASE("robustness evaluates corruption sets and tolerates missing files") {
    TempDir tmp("hdc_harness_robustness");
    const LabeledDataset train = synthetic::toy_dataset(10, 2, 16, 19);
    const LabeledDataset test = synthetic::toy_dataset(5, 2, 16, 20);

    // Clean test set as an IDX pair.
    std::vector<std::uint8_t> pixels;
    for (const auto& img : test.images) {
        pixels.insert(pixels.end(), img.pixels.begin(), img.pixels.end());
    }
    fixtures::write_bytes(tmp.path("t_images.idx"),
                          fixtures::idx_image_bytes(static_cast<std::uint32_t>(test.size()), 16,
                                                    16, pixels));
    fixtures::write_bytes(tmp.path("t_labels.idx"), fixtures::idx_label_bytes(test.labels));

    // A corrupted variant as NPY: invert one stripe.
    std::vector<std::uint8_t> corrupted = pixels;
    for (std::size_t i = 0; i < corrupted.size(); i += 16) {
        corrupted[i] = corrupted[i] ? 0 : 255;
    }
    fixtures::write_bytes(
        tmp.path("c_images.npy"),
        fixtures::npy_bytes("|u1", false, {test.size(), 16, 16}, corrupted));
    fixtures::write_bytes(tmp.path("c_labels.npy"),
                          fixtures::npy_bytes("|u1", false, {test.size()}, test.labels));

    ExperimentSpec spec = toy_spec(EncoderKind::pixelwise);
    const std::vector<CorruptionSpec> corruptions = {
        {"none", tmp.path("t_images.idx"), tmp.path("t_labels.idx"), true},
        {"stripe", tmp.path("c_images.npy"), tmp.path("c_labels.npy"), false},
        {"missing", tmp.path("absent.npy"), tmp.path("absent_labels.npy"), false},
    };
    const nlohmann::ordered_json out = run_robustness(spec, train, corruptions);

    REQUIRE(out["corruptions"].size() == 3);
    CHECK(out["corruptions"][0]["corruption"] == "none");
    CHECK(out["corruptions"][0].contains("accuracy"));
    CHECK(out["corruptions"][1].contains("accuracy"));
    CHECK(out["corruptions"][2].contains("error"));
    CHECK(out["average"]["corruption_count"] == 1); // only "stripe" counts

    // The clean path through robustness matches run_test under the same seeds.
    const MetricsRecord reference = run_test(spec, train, test);
    CHECK(out["corruptions"][0]["accuracy"]["mean"] ==
          doctest::Approx(reference.eval_accuracy.mean).epsilon(1e-12));

    // Determinism end to end.
    CHECK(run_robustness(spec, train, corruptions).dump() == out.dump());
}

TEST_CASE("similarity figures have the documented structure") {
    TempDir tmp("hdc_harness_figures");
    FigureOptions options;
    options.out_dir = tmp.path("figs");
    options.dim = 2048;
    options.seed = 5;
    options.write_pgm = true;
    const auto written = emit_similarity_figures(options);
    CHECK(written.size() == 2 + 4 + 4); // two profiles, four grids, four pgms

    const auto orthogonal = parse_grid_csv(tmp.path("figs/position_similarity_orthogonal.csv"));
    REQUIRE(orthogonal.size() == 28);
    REQUIRE(orthogonal[0].size() == 28);
    CHECK(orthogonal[11][21] == doctest::Approx(1.0));

    const auto linear = parse_grid_csv(tmp.path("figs/position_similarity_linear.csv"));
    // Monotone decay away from the anchor along the anchor row.
    for (std::uint32_t x = 21; x + 1 < 28; ++x) {
        CHECK(linear[11][x + 1] <= linear[11][x] + 1e-9);
    }
    for (std::uint32_t x = 21; x > 0; --x) {
        CHECK(linear[11][x - 1] <= linear[11][x] + 1e-9);
    }

    std::ifstream pgm(tmp.path("figs/position_similarity_local_linear.pgm"));
    std::string magic;
    pgm >> magic;
    CHECK(magic == "P2");

    FigureOptions bad = options;
    bad.anchor_x = 99;
    CHECK_THROWS_AS(emit_similarity_figures(bad), std::invalid_argument);
}

TEST_CASE("encoded vector dumps round-trip") {
    TempDir tmp("hdc_harness_vectors");
    const LabeledDataset ds = synthetic::toy_dataset(4, 2, 16, 23);
    EncoderConfig config;
    config.kind = EncoderKind::pixelwise;
    config.dim = 777;
    config.splits = 1;
    const auto vectors = encode_dataset(ds, config, 99);
    CHECK(encode_dataset(ds, config, 99) == vectors); // deterministic

    const std::string path = tmp.path("vectors.bin");
    write_encoded_vectors(path, vectors, ds.labels, 99);
    const EncodedVectors loaded = read_encoded_vectors(path);
    CHECK(loaded.dim == 777);
    CHECK(loaded.seed == 99);
    CHECK(loaded.labels == ds.labels);
    REQUIRE(loaded.vectors.size() == vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        CHECK(loaded.vectors[i] == vectors[i]);
    }
}
