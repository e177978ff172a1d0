#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mtssel/matrix.hpp"
#include "mtssel/spectral.hpp"

namespace mtssel {

/// Bin (or class) id per sample, each in [0, num_bins).
struct Discretization {
  std::vector<int> bins;
  int num_bins = 0;

  std::size_t size() const { return bins.size(); }
};

/// Wraps dense class ids as a discretization.
Discretization from_labels(std::span<const int> labels);

/// 1-D k-means with `bins` centers. Centers start at the (2i+1)/(2C) quantiles
/// (Hazen plotting positions), Lloyd runs to an assignment fixpoint or 100
/// rounds, ties go to the lower center, and bins are renumbered by ascending
/// center. The seed is accepted for interface stability; the result does not
/// depend on it.
Discretization quantize(std::span<const double> values, int bins, std::uint64_t seed = 0);

// All measures in nats over empirical frequencies.
double entropy(const Discretization& a);
double mutual_information(const Discretization& a, const Discretization& b);
double conditional_mi(const Discretization& a, const Discretization& b, const Discretization& given);

/// I(bins, y) / sqrt(H(bins) H(y)) with bins = quantize(v, C). Zero when the
/// quantized embedding is constant.
double nmi(std::span<const double> embedding, std::span<const int> labels, int num_classes);
double nmi(const Discretization& bins, const Discretization& labels);

enum class PenaltyKind { MI, CMI };

std::string_view to_string(PenaltyKind kind);
PenaltyKind parse_penalty_kind(std::string_view text);

struct RedundancyMatrix {
  PenaltyKind kind = PenaltyKind::CMI;
  Matrix values;        // m x m, rows and columns indexed by feature id
  double gamma = 0.0;   // diagonal shift applied by psd_shift
  std::vector<std::size_t> landmarks; // Nystrom landmark feature ids; empty when exact
};

/// MI:  R_ij = I(v_i; v_j), diagonal H(v_i).
/// CMI: R_ii = I(v_i; y), R_ij = (I(v_i; y | v_j) + I(v_j; y | v_i)) / 2.
/// Every embedding is quantized once with `num_classes` bins.
RedundancyMatrix build_redundancy(std::span<const Embedding> embeddings, std::span<const int> labels, int num_classes,
                                  PenaltyKind kind);
RedundancyMatrix build_redundancy_serial(std::span<const Embedding> embeddings, std::span<const int> labels,
                                         int num_classes, PenaltyKind kind);

/// Same entries from pre-quantized embeddings.
RedundancyMatrix redundancy_from_bins(std::span<const Discretization> bins, const Discretization& labels,
                                      PenaltyKind kind);

/// Nystrom completion from `landmarks` uniformly drawn feature ids:
/// exact landmark block A and cross block B, remaining block B^T A^+ B with a
/// truncated pseudo-inverse (eigenvalues at or below 1e-8 * trace(A) / s are
/// dropped), then symmetrized.
RedundancyMatrix nystrom_redundancy(std::span<const Embedding> embeddings, std::span<const int> labels,
                                    int num_classes, PenaltyKind kind, std::size_t landmarks, std::uint64_t seed);

/// Completion of an explicit matrix from the given landmark ids; only the
/// landmark rows of `exact` are read.
Matrix nystrom_complete(const Matrix& exact, std::span<const std::size_t> landmarks);

enum class EigenMethod { Auto, Dense, Power };

/// Smallest eigenvalue of a symmetric matrix: dense solve for m <= 2000 (Auto),
/// otherwise power iteration on c*I - R with c a Gershgorin bound.
double min_eigenvalue(const Matrix& symmetric, EigenMethod method = EigenMethod::Auto);

/// Adds gamma * I with gamma = max(0, -lambda_min) + 1e-9 and records gamma.
RedundancyMatrix psd_shift(RedundancyMatrix r, EigenMethod method = EigenMethod::Auto);

} // namespace mtssel
