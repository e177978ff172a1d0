#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mtssel/distance.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/matrix.hpp"

namespace mtssel {

struct AggregatedDistance {
  Matrix values;
  std::vector<double> weights; // empty for the unweighted sum
};

/// Unweighted: elementwise sum. Weighted: elementwise sum of w_i * M_i.
AggregatedDistance aggregate(std::span<const DistanceMatrix> matrices,
                             std::optional<std::span<const double>> weights = std::nullopt);

/// Same aggregation over graph complements 1 - W (diagonal kept at zero).
AggregatedDistance aggregate_graph_complements(std::span<const SimilarityGraph> graphs,
                                               std::optional<std::span<const double>> weights = std::nullopt);

/// Label of the nearest training segment for each test id; distance ties go to
/// the smallest training id. `labels` is indexed by segment id.
std::vector<int> nn1_classify(const Matrix& distances, std::span<const std::size_t> train_ids,
                              std::span<const std::size_t> test_ids, std::span<const int> labels);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

} // namespace mtssel
