#include "mtssel/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mtssel/errors.hpp"
#include "mtssel/rng.hpp"

namespace mtssel {

namespace {

double row_dot(std::span<const double> row, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
  return s;
}

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

template <class MatVec>
Embedding run_pie(const SimilarityGraph& graph, const PieOptions& options, std::uint64_t seed, MatVec&& mv) {
  const std::size_t n = graph.size();
  const auto normalized = row_normalize(graph);
  const double epsilon = options.epsilon.value_or(1e-6 / static_cast<double>(n));
  if (!(epsilon > 0.0)) throw ParameterError("pie: epsilon must be positive");

  Embedding e{pie_initial_vector(n, seed), 0};
  if (options.on_iterate) options.on_iterate(0, e.values);

  std::vector<double> next(n), delta(n), prev_delta(n);
  for (std::size_t t = 1; t <= options.max_iter; ++t) {
    mv(normalized.matrix, e.values, next);
    const double norm = l1(next);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ConsistencyError("pie: iterate collapsed to zero");
    double accel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      delta[i] = std::abs(next[i] - e.values[i]);
      accel = std::max(accel, std::abs(prev_delta[i] - delta[i]));
    }
    e.values.swap(next);
    e.iterations_used = t;
    if (options.on_iterate) options.on_iterate(t, e.values);
    if (t >= 2 && accel <= epsilon) break;
    prev_delta.swap(delta);
  }
  return e;
}

} // namespace

std::vector<double> pie_initial_vector(std::size_t n, std::uint64_t seed) {
  CounterRng rng(derive_seed(seed, Stream::PieInit));
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = rng.uniform();
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return v;
}

void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static) if (rows >= 256)
  for (std::ptrdiff_t i = 0; i < rows; ++i) y[static_cast<std::size_t>(i)] = row_dot(a.row(static_cast<std::size_t>(i)), x);
}

void matvec_serial(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = row_dot(a.row(i), x);
}

Embedding pie(const SimilarityGraph& graph, const PieOptions& options, std::uint64_t seed) {
  return run_pie(graph, options, seed, [](const Matrix& a, std::span<const double> x, std::span<double> y) { matvec(a, x, y); });
}

Embedding pie_serial(const SimilarityGraph& graph, const PieOptions& options, std::uint64_t seed) {
  return run_pie(graph, options, seed,
                 [](const Matrix& a, std::span<const double> x, std::span<double> y) { matvec_serial(a, x, y); });
}

} // namespace mtssel
