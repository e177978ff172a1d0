#include "mtssel/eval.hpp"

#include <cmath>

#include "mtssel/errors.hpp"

namespace mtssel {

namespace {

template <class Get>
AggregatedDistance aggregate_impl(std::size_t count, std::size_t n, Get&& get, std::optional<std::span<const double>> weights) {
  if (count == 0) throw ParameterError("aggregate: empty selection");
  if (weights && weights->size() != count) throw ParameterError("aggregate: weights not aligned with matrices");
  AggregatedDistance out{Matrix(n, n), {}};
  if (weights) {
    for (double w : *weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw ParameterError("aggregate: negative or non-finite weight");
    out.weights.assign(weights->begin(), weights->end());
  }
  auto acc = out.values.data();
  for (std::size_t k = 0; k < count; ++k) {
    const Matrix& m = get(k);
    if (m.rows() != n || m.cols() != n) throw ParameterError("aggregate: matrix size mismatch");
    const auto src = m.data();
    if (weights) {
      const double w = (*weights)[k];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * src[i];
    } else {
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += src[i];
    }
  }
  return out;
}

} // namespace

AggregatedDistance aggregate(std::span<const DistanceMatrix> matrices, std::optional<std::span<const double>> weights) {
  const std::size_t n = matrices.empty() ? 0 : matrices.front().values.rows();
  return aggregate_impl(matrices.size(), n, [&](std::size_t k) -> const Matrix& { return matrices[k].values; }, weights);
}

AggregatedDistance aggregate_graph_complements(std::span<const SimilarityGraph> graphs,
                                               std::optional<std::span<const double>> weights) {
  std::vector<Matrix> complements;
  complements.reserve(graphs.size());
  for (const auto& g : graphs) {
    Matrix c(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        if (i != j) c(i, j) = 1.0 - g.adjacency(i, j);
    complements.push_back(std::move(c));
  }
  const std::size_t n = graphs.empty() ? 0 : graphs.front().size();
  return aggregate_impl(complements.size(), n, [&](std::size_t k) -> const Matrix& { return complements[k]; }, weights);
}

std::vector<int> nn1_classify(const Matrix& distances, std::span<const std::size_t> train_ids,
                              std::span<const std::size_t> test_ids, std::span<const int> labels) {
  if (train_ids.empty()) throw ParameterError("nn1_classify: empty training set");
  const std::size_t n = distances.rows();
  for (auto id : train_ids)
    if (id >= n || id >= labels.size()) throw ParameterError("nn1_classify: training id out of range");
  for (auto id : test_ids)
    if (id >= n) throw ParameterError("nn1_classify: test id out of range");

  std::vector<int> predicted(test_ids.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t tt = 0; tt < static_cast<std::ptrdiff_t>(test_ids.size()); ++tt) {
    const auto t = test_ids[static_cast<std::size_t>(tt)];
    std::size_t best = train_ids[0];
    double best_d = distances(t, best);
    for (std::size_t r = 1; r < train_ids.size(); ++r) {
      const auto id = train_ids[r];
      const double d = distances(t, id);
      if (d < best_d || (d == best_d && id < best)) {
        best = id;
        best_d = d;
      }
    }
    predicted[static_cast<std::size_t>(tt)] = labels[best];
  }
  return predicted;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw ParameterError("accuracy: need equal, non-zero lengths");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

} // namespace mtssel
