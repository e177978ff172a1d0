#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mtssel/distance.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/spectral.hpp"

namespace mtssel {

/// Per-feature k-NN similarity graphs and their power iteration embeddings.
struct FeatureGraphs {
  std::vector<SimilarityGraph> graphs;
  std::vector<Embedding> embeddings;
};

/// k clamped to n-1 with a warning when the sample is too small.
std::size_t effective_knn(std::size_t knn_k, std::size_t n);

/// distance -> knn_graph -> symmetrize -> pie for every feature, in parallel
/// across features. Every feature uses the same PIE start vector (it depends
/// only on seed and n), so identical features get identical embeddings.
FeatureGraphs build_feature_graphs(std::span<const DistanceMatrix> distances, std::size_t knn_k,
                                   const PieOptions& pie_options, std::uint64_t seed);

/// Training-segment restriction of every full distance matrix.
std::vector<DistanceMatrix> restrict_all(std::span<const DistanceMatrix> full, std::span<const std::size_t> ids);

} // namespace mtssel
