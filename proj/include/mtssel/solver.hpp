#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mtssel/graph.hpp"
#include "mtssel/matrix.hpp"

namespace mtssel {

/// Graphs flattened row-major into the columns of H (n^2 x m) and h_y.
struct FlatDesign {
  std::size_t length = 0;            // n^2
  std::vector<std::vector<double>> columns; // H_k
  std::vector<double> target;        // h_y
  std::vector<double> gram_diag;     // H_k^T H_k
  std::vector<double> correlation;   // H_k^T h_y

  std::size_t num_features() const { return columns.size(); }
};

FlatDesign flatten(std::span<const SimilarityGraph> graphs, const SimilarityGraph& target);

/// Design from explicit columns; used for small hand-built problems.
FlatDesign make_design(std::vector<std::vector<double>> columns, std::vector<double> target);

/// 1/2 |h_y - H a|^2 + lambda |a|_1 + beta a^T Q a.
double objective(std::span<const double> alpha, const FlatDesign& design, const Matrix& qhat, double lambda, double beta);

/// Derivative of the smooth part along coordinate k:
/// H_k^T H a - H_k^T h_y + 2 beta a^T Q_{.,k}, evaluated as -H_k^T r + 2 beta (Q a)_k.
double coordinate_gradient(std::span<const double> alpha, std::size_t k, const FlatDesign& design, const Matrix& qhat,
                           double beta, std::span<const double> residual);
/// Same, forming the residual r = h_y - H a from scratch.
double coordinate_gradient(std::span<const double> alpha, std::size_t k, const FlatDesign& design, const Matrix& qhat,
                           double beta);

std::vector<double> residual(std::span<const double> alpha, const FlatDesign& design);

/// max(0, x - threshold): soft threshold followed by projection onto x >= 0.
double prox_l1_nonneg(double x, double threshold);

struct SolveOptions {
  double lambda = 0.0;
  double beta = 1.0;
  std::size_t max_sweeps = 10000;
  double tol = 1e-8;
};

struct SolveResult {
  std::vector<double> alpha;
  std::vector<double> objective_trace; // value after each sweep
  std::size_t sweeps_used = 0;
  bool converged = false;

  double final_objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// Cyclic coordinate descent from a = 0 with exact per-coordinate minimization:
/// a_k <- prox_l1_nonneg(z_k a_k - g_k, lambda) / z_k, z_k = H_k^T H_k + 2 beta Q_kk.
/// Stops when the largest coordinate change is <= tol * (1 + |a|_inf).
/// Throws ConsistencyError if the objective rises by more than 1e-10 relative.
SolveResult solve(const FlatDesign& design, const Matrix& qhat, const SolveOptions& options);

/// Smallest lambda for which a = 0 is optimal: max_k |H_k^T h_y|.
double lambda_max(const FlatDesign& design);

struct TargetSizeResult {
  SolveResult solve;
  double lambda = 0.0;
  std::size_t achieved_size = 0;
  std::size_t steps = 0;
};

/// Bisection on lambda in [0, lambda_max] for a support of `target` features
/// (support size assumed nonincreasing in lambda). Returns the first exact hit,
/// otherwise the closest size seen after 30 steps (ties prefer the smaller support).
TargetSizeResult solve_for_target_size(const FlatDesign& design, const Matrix& qhat, std::size_t target,
                                       SolveOptions options, double support_epsilon);

std::size_t support_size(std::span<const double> alpha, double support_epsilon);

} // namespace mtssel
