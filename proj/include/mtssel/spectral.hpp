#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mtssel/graph.hpp"

namespace mtssel {

struct PieOptions {
  // Stop once max_i |delta^t_i - delta^{t+1}_i| <= epsilon. Unset means 1e-6 / n.
  std::optional<double> epsilon;
  std::size_t max_iter = 1000;
  // Called with (t, v^t) for the initial vector and every iterate.
  std::function<void(std::size_t, std::span<const double>)> on_iterate;
};

/// Power iteration embedding: an early-stopped power iteration on D^{-1} W.
struct Embedding {
  std::vector<double> values; // l1-normalized
  std::size_t iterations_used = 0;
};

/// v^0 with entries i.i.d. uniform from the seeded stream, l1-normalized.
std::vector<double> pie_initial_vector(std::size_t n, std::uint64_t seed);

/// Iterates v <- N v / |N v|_1 with N = row_normalize(W), delta^t = |v^t - v^{t-1}|.
/// The acceleration test needs two deltas, so at least two iterations run
/// before it is checked. Hitting max_iter is not an error.
Embedding pie(const SimilarityGraph& graph, const PieOptions& options, std::uint64_t seed);
Embedding pie_serial(const SimilarityGraph& graph, const PieOptions& options, std::uint64_t seed);

/// y = A x with one fixed-order dot product per row; the parallel and serial
/// kernels agree bitwise.
void matvec(const Matrix& a, std::span<const double> x, std::span<double> y);
void matvec_serial(const Matrix& a, std::span<const double> x, std::span<double> y);

} // namespace mtssel
