#include "mtssel/graph.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mtssel/errors.hpp"

namespace mtssel {

namespace {

void check_knn_args(const Matrix& distances, std::size_t k) {
  if (!distances.is_square()) throw ParameterError("knn_graph: distance matrix must be square");
  const std::size_t n = distances.rows();
  if (k < 1) throw ParameterError("knn_graph: k must be at least 1");
  if (k >= n) throw ParameterError("knn_graph: k=" + std::to_string(k) + " must be smaller than n=" + std::to_string(n));
}

void knn_row(const Matrix& distances, std::size_t k, std::size_t i, std::vector<std::size_t>& candidates, Matrix& out) {
  const std::size_t n = distances.rows();
  candidates.clear();
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) candidates.push_back(j);
  const auto row = distances.row(i);
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(),
                    [&](std::size_t a, std::size_t b) { return row[a] < row[b] || (row[a] == row[b] && a < b); });
  for (std::size_t r = 0; r < k; ++r) out(i, candidates[r]) = 1.0;
}

} // namespace

Matrix knn_graph(const Matrix& distances, std::size_t k) {
  check_knn_args(distances, k);
  const std::size_t n = distances.rows();
  Matrix out(n, n);
#pragma omp parallel
  {
    std::vector<std::size_t> candidates;
    candidates.reserve(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      knn_row(distances, k, static_cast<std::size_t>(i), candidates, out);
  }
  return out;
}

Matrix knn_graph_serial(const Matrix& distances, std::size_t k) {
  check_knn_args(distances, k);
  const std::size_t n = distances.rows();
  Matrix out(n, n);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) knn_row(distances, k, i, candidates, out);
  return out;
}

SimilarityGraph symmetrize(const Matrix& directed) {
  if (!directed.is_square()) throw ParameterError("symmetrize: matrix must be square");
  const std::size_t n = directed.rows();
  SimilarityGraph g{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = 0.5 * (directed(i, j) + directed(j, i));
      g.adjacency(i, j) = w;
      g.adjacency(j, i) = w;
    }
  }
  return g;
}

SimilarityGraph label_graph(std::span<const int> labels) {
  const std::size_t n = labels.size();
  if (n == 0 || std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels[0]; }))
    throw InputError("degenerate label graph: fewer than 2 distinct labels");
  SimilarityGraph g{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && labels[i] == labels[j]) g.adjacency(i, j) = 1.0;
  return g;
}

DegreeNormalized row_normalize(const SimilarityGraph& graph) {
  const std::size_t n = graph.size();
  DegreeNormalized out{graph.adjacency};
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.matrix.row(i);
    double degree = 0.0;
    for (double w : row) degree += w;
    if (!(degree > 0.0)) throw InputError("row_normalize: vertex " + std::to_string(i) + " is isolated (zero degree)");
    for (double& w : row) w /= degree;
  }
  return out;
}

} // namespace mtssel
