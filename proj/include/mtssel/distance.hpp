#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtssel/dataset.hpp"
#include "mtssel/matrix.hpp"

namespace mtssel {

struct DistanceOptions {
  // Sakoe-Chiba half width; unset means unconstrained DTW. The band is widened
  // to |ns - nt| so a warp path always exists.
  std::optional<std::size_t> dtw_window;
  // z-normalize each series before DTW.
  bool znorm = false;
};

/// Dynamic time warping with element cost |s_i - t_j| and steps
/// {(i+1,j), (i,j+1), (i+1,j+1)}. O(ns*nt) time, O(nt) memory.
double dtw(std::span<const double> s, std::span<const double> t, std::optional<std::size_t> window = std::nullopt);

double scalar_distance(double a, double b);
double categorical_distance(std::string_view a, std::string_view b);

/// Zero mean, unit variance; a constant series maps to all zeros.
std::vector<double> znormalize(std::span<const double> series);

/// Pairwise distances between segments for one feature.
struct DistanceMatrix {
  std::size_t feature_id = 0;
  Matrix values;
};

// OpenMP over the upper triangle. Every cell is computed independently, so the
// result is bit-identical to distance_matrix_serial for any thread count.
DistanceMatrix distance_matrix(const Dataset& dataset, std::size_t feature_id, const DistanceOptions& options = {});
DistanceMatrix distance_matrix_serial(const Dataset& dataset, std::size_t feature_id, const DistanceOptions& options = {});

/// Restriction to the given segment ids (rows and columns, in that order).
DistanceMatrix submatrix(const DistanceMatrix& full, std::span<const std::size_t> ids);

/// On-disk cache: `<root>/<key>/M_<feature_id>.csv`, n rows of n values.
class DistanceCache {
public:
  explicit DistanceCache(std::filesystem::path root) : root_(std::move(root)) {}

  static std::uint64_t key(const Dataset& dataset, const DistanceOptions& options);

  std::filesystem::path path(std::uint64_t key, std::size_t feature_id) const;
  std::optional<DistanceMatrix> load(std::uint64_t key, std::size_t feature_id, std::size_t n) const;
  void store(std::uint64_t key, const DistanceMatrix& matrix) const;

private:
  std::filesystem::path root_;
};

/// All per-feature matrices over every segment, read through the cache when given.
std::vector<DistanceMatrix> all_distance_matrices(const Dataset& dataset, const DistanceOptions& options = {},
                                                  const DistanceCache* cache = nullptr);

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

} // namespace mtssel
