#include "mtssel/ranker.hpp"

#include <algorithm>
#include <numeric>

#include "mtssel/errors.hpp"
#include "mtssel/info.hpp"
#include "mtssel/pipeline.hpp"

namespace mtssel {

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

RankResult pie_rank(std::span<const DistanceMatrix> distances, std::span<const int> labels, int num_classes,
                    const RankOptions& options) {
  const auto features = build_feature_graphs(distances, options.knn_k, options.pie, options.seed);
  RankResult r;
  r.scores.reserve(distances.size());
  for (std::size_t j = 0; j < distances.size(); ++j) {
    try {
      r.scores.push_back(nmi(features.embeddings[j].values, labels, num_classes));
    } catch (const InputError& e) {
      throw InputError("feature " + std::to_string(distances[j].feature_id) + ": " + e.what());
    }
  }
  r.order = order_by_score(r.scores);
  return r;
}

RankResult pie_rank(const Dataset& dataset, const RankOptions& options, const DistanceOptions& distance_options,
                    const DistanceCache* cache) {
  const auto full = all_distance_matrices(dataset, distance_options, cache);
  const auto train = restrict_all(full, dataset.train_ids);
  const auto labels = dataset.label_indices(dataset.train_ids);
  return pie_rank(train, labels, static_cast<int>(dataset.num_classes()), options);
}

RankResult average_scores(std::span<const RankResult> results) {
  if (results.empty()) throw ParameterError("average_scores: no results");
  const std::size_t m = results.front().scores.size();
  RankResult out{std::vector<double>(m, 0.0), {}};
  for (const auto& r : results) {
    if (r.scores.size() != m) throw ParameterError("average_scores: dimension mismatch");
    for (std::size_t j = 0; j < m; ++j) out.scores[j] += r.scores[j];
  }
  for (auto& s : out.scores) s /= static_cast<double>(results.size());
  out.order = order_by_score(out.scores);
  return out;
}

} // namespace mtssel
