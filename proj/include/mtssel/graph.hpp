#pragma once

#include <cstddef>
#include <span>

#include "mtssel/matrix.hpp"

namespace mtssel {

/// Symmetric adjacency with zero diagonal and weights in [0, 1].
struct SimilarityGraph {
  Matrix adjacency;

  std::size_t size() const { return adjacency.rows(); }
};

/// D^{-1} W: row-stochastic.
struct DegreeNormalized {
  Matrix matrix;
};

/// Directed binary k-NN graph: row i has ones at the k columns j != i with the
/// smallest distances, ties broken by the smaller column index. Edge weights
/// are 1 regardless of distance.
Matrix knn_graph(const Matrix& distances, std::size_t k);
Matrix knn_graph_serial(const Matrix& distances, std::size_t k);

/// 0.5 * (W + W^T), diagonal forced to zero.
SimilarityGraph symmetrize(const Matrix& directed);

/// Same-label indicator with zero diagonal. Throws when all labels are equal.
SimilarityGraph label_graph(std::span<const int> labels);

/// Throws InputError naming the first vertex with zero degree.
DegreeNormalized row_normalize(const SimilarityGraph& graph);

} // namespace mtssel
