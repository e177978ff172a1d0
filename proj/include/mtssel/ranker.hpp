#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mtssel/dataset.hpp"
#include "mtssel/distance.hpp"
#include "mtssel/spectral.hpp"

namespace mtssel {

struct RankResult {
  std::vector<double> scores;     // NMI score per feature id
  std::vector<std::size_t> order; // feature ids by descending score, ties by ascending id
};

struct RankOptions {
  std::size_t knn_k = 10;
  PieOptions pie;
  std::uint64_t seed = 0;
};

std::vector<std::size_t> order_by_score(std::span<const double> scores);

/// Scores every feature by NMI between its PIE embedding and the labels.
/// `distances` and `labels` must already be restricted to training segments.
RankResult pie_rank(std::span<const DistanceMatrix> distances, std::span<const int> labels, int num_classes,
                    const RankOptions& options);

/// Convenience: ranks on the dataset's training segments.
RankResult pie_rank(const Dataset& dataset, const RankOptions& options, const DistanceOptions& distance_options = {},
                    const DistanceCache* cache = nullptr);

/// Componentwise mean of scores across results (e.g. several datasets).
RankResult average_scores(std::span<const RankResult> results);

} // namespace mtssel
