#include "hdc/item_memory.hpp"

#include <stdexcept>
#include <string>

namespace hdc {

namespace {

// total split over `slots` parts: floor for everyone, remainder handed to the
// earliest slots so sizes differ by at most one.
std::vector<std::uint32_t> spread_evenly(std::uint32_t total, std::uint32_t slots) {
    std::vector<std::uint32_t> out(slots, total / slots);
    const std::uint32_t rest = total % slots;
    for (std::uint32_t i = 0; i < rest; ++i) {
        ++out[i];
    }
    return out;
}

// Appends `steps` vectors to the chain. Each step flips a fresh batch of
// component positions never touched earlier in this chain; the batches
// together cover exactly floor(D/2) positions, so the chain's two ends sit
// at exact orthogonality.
void extend_linear_chain(std::vector<Hypervector>& entries, std::uint32_t steps,
                         RandomSource& rng) {
    const std::uint32_t dim = entries.back().dim();
    const auto order = shuffled_indices(dim, rng);
    const auto per_step = spread_evenly(dim / 2, steps);
    std::size_t next = 0;
    for (std::uint32_t step = 0; step < steps; ++step) {
        Hypervector level = entries.back();
        for (std::uint32_t f = 0; f < per_step[step]; ++f) {
            level.flip_bit(order[next++]);
        }
        entries.push_back(std::move(level));
    }
}

} // namespace

std::string to_string(MappingKind kind) {
    switch (kind) {
    case MappingKind::orthogonal: return "orthogonal";
    case MappingKind::linear: return "linear";
    case MappingKind::local_linear: return "local_linear";
    case MappingKind::concatenation: return "concatenation";
    }
    return "unknown";
}

ItemMemory::ItemMemory(MappingKind kind, std::uint32_t splits, std::vector<Hypervector> entries)
    : entries_(std::move(entries)), kind_(kind), splits_(splits) {
    if (entries_.empty()) {
        throw std::invalid_argument("item memory must hold at least one entry");
    }
    for (const auto& entry : entries_) {
        if (entry.dim() != entries_.front().dim()) {
            throw std::invalid_argument("item memory entries must share one dimension");
        }
    }
}

const Hypervector& ItemMemory::at(std::size_t level) const {
    if (level >= entries_.size()) {
        throw std::out_of_range("item memory level " + std::to_string(level) +
                                " out of range (size " + std::to_string(entries_.size()) + ")");
    }
    return entries_[level];
}

std::vector<double> ItemMemory::similarity_profile(std::size_t anchor) const {
    const Hypervector& ref = at(anchor);
    std::vector<double> profile(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        profile[k] = similarity(ref, entries_[k]);
    }
    return profile;
}

ItemMemory build_orthogonal(RandomSource& rng, std::size_t levels, std::uint32_t dim) {
    if (levels == 0) {
        throw std::invalid_argument("orthogonal mapping needs at least one level");
    }
    std::vector<Hypervector> entries;
    entries.reserve(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        entries.push_back(Hypervector::random(rng, dim));
    }
    return ItemMemory(MappingKind::orthogonal, 0, std::move(entries));
}

ItemMemory build_linear(RandomSource& rng, std::size_t levels, std::uint32_t dim) {
    if (levels < 2) {
        throw std::invalid_argument("linear mapping needs at least two levels");
    }
    std::vector<Hypervector> entries;
    entries.reserve(levels);
    entries.push_back(Hypervector::random(rng, dim));
    extend_linear_chain(entries, static_cast<std::uint32_t>(levels - 1), rng);
    return ItemMemory(MappingKind::linear, 1, std::move(entries));
}

ItemMemory build_local_linear(RandomSource& rng, std::size_t levels, std::uint32_t splits,
                              std::uint32_t dim) {
    if (levels < 2) {
        throw std::invalid_argument("local linear mapping needs at least two levels");
    }
    if (splits < 1 || splits > levels - 1) {
        throw std::invalid_argument("local linear mapping: splits must lie in [1, levels-1], got " +
                                    std::to_string(splits) + " for " + std::to_string(levels) +
                                    " levels");
    }
    const auto steps_per_split =
        spread_evenly(static_cast<std::uint32_t>(levels - 1), splits);
    std::vector<Hypervector> entries;
    entries.reserve(levels);
    entries.push_back(Hypervector::random(rng, dim));
    for (std::uint32_t s = 0; s < splits; ++s) {
        extend_linear_chain(entries, steps_per_split[s], rng);
    }
    return ItemMemory(MappingKind::local_linear, splits, std::move(entries));
}

ItemMemory build_concatenation(RandomSource& rng, std::size_t levels, std::uint32_t edges,
                               std::uint32_t dim) {
    if (levels < 2) {
        throw std::invalid_argument("concatenation mapping needs at least two levels");
    }
    if (edges < 2 || edges > levels) {
        throw std::invalid_argument("concatenation mapping: edges must lie in [2, levels], got " +
                                    std::to_string(edges));
    }
    const auto steps_per_span =
        spread_evenly(static_cast<std::uint32_t>(levels - 1), edges - 1);
    std::vector<Hypervector> edge_vectors;
    edge_vectors.reserve(edges);
    for (std::uint32_t e = 0; e < edges; ++e) {
        edge_vectors.push_back(Hypervector::random(rng, dim));
    }
    std::vector<Hypervector> entries;
    entries.reserve(levels);
    for (std::uint32_t span = 0; span < edges - 1; ++span) {
        const Hypervector& lower = edge_vectors[span];
        const Hypervector& upper = edge_vectors[span + 1];
        const std::uint32_t steps = steps_per_span[span];
        for (std::uint32_t j = 0; j < steps; ++j) {
            // Leading cut components come from the lower edge, the rest from
            // the upper; the cut shrinks linearly with the offset j.
            const std::uint32_t cut = static_cast<std::uint32_t>(
                (static_cast<std::uint64_t>(steps - j) * dim) / steps);
            Hypervector level = lower;
            for (std::uint32_t d = cut; d < dim; ++d) {
                level.set_bit(d, upper.bit(d));
            }
            entries.push_back(std::move(level));
        }
    }
    entries.push_back(edge_vectors.back());
    return ItemMemory(MappingKind::concatenation, 0, std::move(entries));
}

} // namespace hdc
