#include "mtssel/pipeline.hpp"

#include "mtssel/errors.hpp"
#include "mtssel/log.hpp"
#include "mtssel/parallel.hpp"

namespace mtssel {

std::size_t effective_knn(std::size_t knn_k, std::size_t n) {
  if (n < 2) throw ParameterError("need at least 2 segments to build a k-NN graph");
  if (knn_k < 1) throw ParameterError("knn k must be at least 1");
  if (knn_k >= n) {
    warn("knn k=" + std::to_string(knn_k) + " clamped to " + std::to_string(n - 1) + " for n=" + std::to_string(n));
    return n - 1;
  }
  return knn_k;
}

FeatureGraphs build_feature_graphs(std::span<const DistanceMatrix> distances, std::size_t knn_k,
                                   const PieOptions& pie_options, std::uint64_t seed) {
  const std::size_t m = distances.size();
  if (m == 0) throw ParameterError("no features");
  const std::size_t n = distances.front().values.rows();
  const std::size_t k = effective_knn(knn_k, n);
  FeatureGraphs out{std::vector<SimilarityGraph>(m), std::vector<Embedding>(m)};
  TaskErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(m); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    try {
      if (distances[j].values.rows() != n) throw ParameterError("distance matrices differ in size");
      out.graphs[j] = symmetrize(knn_graph_serial(distances[j].values, k));
      out.embeddings[j] = pie_serial(out.graphs[j], pie_options, seed);
    } catch (const ConsistencyError&) {
      errors.capture(j);
    } catch (const std::exception& e) {
      try {
        throw InputError("feature " + std::to_string(distances[j].feature_id) + ": " + e.what());
      } catch (...) {
        errors.capture(j);
      }
    }
  }
  errors.rethrow();
  return out;
}

std::vector<DistanceMatrix> restrict_all(std::span<const DistanceMatrix> full, std::span<const std::size_t> ids) {
  std::vector<DistanceMatrix> out;
  out.reserve(full.size());
  for (const auto& d : full) out.push_back(submatrix(d, ids));
  return out;
}

} // namespace mtssel
