#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mtssel {

enum class FeatureKind { TimeSeries, Scalar, Categorical };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text); // throws InputError

struct FeatureDescriptor {
  std::size_t id = 0;
  std::string name;
  FeatureKind kind = FeatureKind::TimeSeries;

  friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

using Series = std::vector<double>;
// Holds the alternative matching the descriptor kind: Series, scalar, or category token.
using FeatureValue = std::variant<Series, double, std::string>;

struct Segment {
  std::size_t id = 0;
  std::vector<FeatureValue> values; // indexed by feature id
  std::string label;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Labeled multivariate segments plus a train/test partition.
///
/// Immutable once loaded or built; every pipeline stage takes it by const
/// reference and may share it across worker threads.
struct Dataset {
  std::vector<FeatureDescriptor> descriptors;
  std::vector<Segment> segments;
  std::vector<std::string> classes; // first-appearance order
  std::vector<std::size_t> train_ids;
  std::vector<std::size_t> test_ids;

  std::size_t num_segments() const { return segments.size(); }
  std::size_t num_features() const { return descriptors.size(); }
  std::size_t num_classes() const { return classes.size(); }

  // Dense class index of a segment's label.
  int label_index(std::size_t segment) const;
  std::vector<int> label_indices(std::span<const std::size_t> ids) const;
  std::vector<int> label_indices() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Checks every type invariant; throws InputError describing the first violation.
void validate(const Dataset& dataset);

/// Reads `meta.json`, `labels.csv`, `values/<feature>.csv` and, when present,
/// `split.csv` (`segment_id,set` with set in {train,test}). Without a split
/// file every segment is a training segment.
Dataset load_dataset(const std::filesystem::path& root);

/// Writes the on-disk layout read by load_dataset. The split file is written
/// only when the dataset has test segments.
void write_dataset(const Dataset& dataset, const std::filesystem::path& root);

/// Deterministic stratified split. Each class keeps at least one segment on
/// each side; throws ParameterError("cannot stratify ...") otherwise.
Dataset split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

/// Reorders features: result feature i is input feature order[i] (ids renumbered).
Dataset permute_features(const Dataset& dataset, std::span<const std::size_t> order);

/// Stable 64-bit hash over descriptors and feature values. Labels and the
/// split are excluded: they never influence a distance matrix.
std::uint64_t value_hash(const Dataset& dataset);

} // namespace mtssel
