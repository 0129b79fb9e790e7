#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "textlier/corpus/document.hpp"
#include "textlier/feature.hpp"

namespace textlier::corpus {

/// `normal` plus a seeded uniform sample (without replacement) of `n_inject`
/// documents from `outlier_pool`, shuffled. Sources are kept as given.
/// Throws ArgumentError if n_inject exceeds the pool or ids collide.
std::vector<RawDocument> inject_outliers(std::span<const RawDocument> normal,
                                         std::span<const RawDocument> outlier_pool,
                                         std::size_t n_inject, std::uint64_t seed);

/// Per-class seeded three-way split (train, validation, test). Class counts are
/// allocated by largest remainder, every partition with a positive fraction
/// receives at least one member of each class, and documents keep their input
/// order within a partition. Throws StratificationError when a class has fewer
/// documents than there are non-empty partitions.
DatasetSplit stratified_split(std::span<const EmbeddedDocument> docs,
                              const std::array<double, 3>& fractions, std::uint64_t seed);

/// Duplicates minority-class items (uniform, with replacement) until both
/// classes have equal counts, then shuffles. Throws ArgumentError unless both
/// classes are present.
std::vector<LabeledFeature> oversample(std::span<const LabeledFeature> items, std::uint64_t seed);

}  // namespace textlier::corpus
