#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mtssel/dataset.hpp"
#include "mtssel/distance.hpp"
#include "mtssel/info.hpp"
#include "mtssel/spectral.hpp"

namespace mtssel {

inline constexpr double kSupportEpsilon = 1e-9;
inline constexpr std::size_t kNystromAutoThreshold = 512;

struct SelectOptions {
  std::size_t knn_k = 10;
  // Exactly one of lambda / target_size must be set.
  std::optional<double> lambda;
  std::optional<std::size_t> target_size;
  double beta = 1.0;
  PenaltyKind penalty = PenaltyKind::CMI;
  // Landmark count; unset means automatic (Nystrom only when m > 512), 0 disables.
  std::optional<std::size_t> nystrom_landmarks;
  PieOptions pie;
  std::size_t max_sweeps = 10000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct SelectionResult {
  std::vector<double> alpha;
  std::vector<std::size_t> selected; // ascending ids with alpha > kSupportEpsilon
  PenaltyKind penalty = PenaltyKind::CMI;
  double lambda = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  std::size_t sweeps_used = 0;
  bool converged = false;
  double final_objective = 0.0;
  std::vector<std::size_t> nystrom_landmarks; // empty when the penalty was exact
  RedundancyMatrix penalty_matrix;            // shifted matrix used by the solver
};

std::vector<std::size_t> support(std::span<const double> alpha);

/// Graphs and embeddings per feature, label graph, penalty matrix (exact or
/// Nystrom, then PSD-shifted), flattened design, coordinate descent, support.
/// Inputs must be restricted to training segments.
SelectionResult pie_ss(std::span<const DistanceMatrix> distances, std::span<const int> labels, int num_classes,
                       const SelectOptions& options);

SelectionResult pie_ss(const Dataset& dataset, const SelectOptions& options, const DistanceOptions& distance_options = {},
                       const DistanceCache* cache = nullptr);

} // namespace mtssel
