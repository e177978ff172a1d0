#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mtssel/dataset.hpp"

namespace mtssel {

struct SyntheticOptions {
  std::size_t segments = 60;
  std::size_t classes = 3;
  std::size_t informative = 5;
  std::size_t noise = 15;
  std::uint64_t seed = 0;
  // Feature ids to copy verbatim; copy i is appended as feature m + i.
  std::vector<std::size_t> duplicates;
  std::size_t min_length = 24;
  std::size_t max_length = 40;
  // Gap between class levels of an informative feature, in noise standard deviations.
  double level_spacing = 2.0;
};

/// Planted dataset: informative time-series features follow a class-specific
/// level and sinusoid plus unit Gaussian noise; noise features are pure
/// N(0, 1). Series lengths vary per segment. Labels are balanced ("c0", "c1",
/// ...); every segment is a training segment.
Dataset gen_synthetic(const SyntheticOptions& options);

} // namespace mtssel
