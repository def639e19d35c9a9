#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdc/bundle.hpp"
#include "hdc/hypervector.hpp"
#include "hdc/random.hpp"

namespace hdc {

struct TrainingOptions {
    std::uint32_t max_iterations = 1000;
    std::uint32_t check_interval = 100;
    double stop_threshold = 0.99; // stop once best accuracy strictly exceeds this
};

struct TrainingReport {
    double best_train_accuracy = 0.0;
    std::uint32_t best_iteration = 0; // 1-based iteration that reached the best accuracy
    std::uint32_t iterations_run = 0;
    std::vector<double> accuracy_trace; // accuracy measured at the start of each iteration
    bool stopped_early = false;
};

/// Centroid classifier over binary hypervectors: one bundle per class, a
/// binarized prototype per bundle, nearest-prototype inference by similarity.
class ClassifierModel {
public:
    /// Empty model; tie_seed drives prototype tie-breaking (child stream per
    /// refresh, so accuracy traces are reproducible).
    ClassifierModel(std::vector<std::string> labels, std::uint32_t dim, std::uint64_t tie_seed);

    /// Bundles every sample into its class and binarizes the prototypes.
    /// labels[i] indexes into label_names. Every class must receive at least
    /// one sample.
    static ClassifierModel train_initial(const std::vector<Hypervector>& samples,
                                         const std::vector<std::uint32_t>& labels,
                                         std::vector<std::string> label_names,
                                         std::uint32_t dim, std::uint64_t tie_seed);

    /// Index of the most similar prototype; exact ties go to the lowest index.
    std::uint32_t predict(const Hypervector& sample) const;

    /// Iterative refinement: each iteration sweeps all samples with frozen
    /// prototypes, moves every misclassified sample from the predicted to the
    /// true class bundle, then rebinarizes the prototypes. The model with the
    /// best measured training accuracy is kept; every check_interval
    /// iterations training stops once that best strictly exceeds
    /// stop_threshold.
    TrainingReport retrain(const std::vector<Hypervector>& samples,
                           const std::vector<std::uint32_t>& labels,
                           const TrainingOptions& options);

    /// Fraction of samples whose prediction matches the given label.
    double evaluate(const std::vector<Hypervector>& samples,
                    const std::vector<std::uint32_t>& labels) const;

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::uint32_t dim() const noexcept { return dim_; }
    std::uint64_t tie_seed() const noexcept { return tie_seed_; }
    const std::vector<Bundle>& class_bundles() const noexcept { return bundles_; }
    const std::vector<Hypervector>& prototypes() const noexcept { return prototypes_; }

    /// Rebinarizes all prototypes from the bundles using the given stream.
    void refresh_prototypes(RandomSource& rng);

    /// Versioned binary container; round-trips bit-exactly.
    void save(const std::string& path) const;
    static ClassifierModel load(const std::string& path);

    bool operator==(const ClassifierModel& other) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<Bundle> bundles_;
    std::vector<Hypervector> prototypes_;
    std::uint32_t dim_;
    std::uint64_t tie_seed_;
};

} // namespace hdc
