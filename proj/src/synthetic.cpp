#include "mtssel/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "mtssel/errors.hpp"
#include "mtssel/rng.hpp"

namespace mtssel {

Dataset gen_synthetic(const SyntheticOptions& o) {
  if (o.informative < 1) throw ParameterError("gen-synthetic: need at least 1 informative feature");
  if (o.classes < 2) throw ParameterError("gen-synthetic: need at least 2 classes");
  if (o.segments < 2 * o.classes) throw ParameterError("gen-synthetic: need at least 2 segments per class");
  if (o.min_length < 1 || o.max_length < o.min_length) throw ParameterError("gen-synthetic: invalid length range");
  const std::size_t base = o.informative + o.noise;
  for (auto d : o.duplicates)
    if (d >= base) throw ParameterError("gen-synthetic: duplicate id " + std::to_string(d) + " out of range");

  CounterRng rng(derive_seed(o.seed, Stream::Synthetic));
  Dataset d;
  for (std::size_t j = 0; j < o.informative; ++j) d.descriptors.push_back({j, "inf" + std::to_string(j), FeatureKind::TimeSeries});
  for (std::size_t j = 0; j < o.noise; ++j)
    d.descriptors.push_back({o.informative + j, "noise" + std::to_string(j), FeatureKind::TimeSeries});
  for (std::size_t c = 0; c < o.classes; ++c) d.classes.push_back("c" + std::to_string(c));

  // Class -> (level rank, frequency rank) per informative feature.
  std::vector<std::vector<std::size_t>> level_rank(o.informative), freq_rank(o.informative);
  for (std::size_t j = 0; j < o.informative; ++j) {
    level_rank[j].resize(o.classes);
    std::iota(level_rank[j].begin(), level_rank[j].end(), 0);
    rng.shuffle(level_rank[j]);
    freq_rank[j] = level_rank[j];
    rng.shuffle(freq_rank[j]);
  }

  const std::size_t span = o.max_length - o.min_length + 1;
  for (std::size_t i = 0; i < o.segments; ++i) {
    Segment s;
    s.id = i;
    const std::size_t c = i % o.classes;
    s.label = d.classes[c];
    for (std::size_t j = 0; j < base; ++j) {
      const std::size_t len = o.min_length + rng.below(span);
      Series x(len);
      if (j < o.informative) {
        const double level = o.level_spacing * static_cast<double>(level_rank[j][c]);
        const double cycles = 1.0 + static_cast<double>(freq_rank[j][c]);
        const double phase = 0.5 * rng.uniform();
        for (std::size_t t = 0; t < len; ++t) {
          const double u = static_cast<double>(t) / static_cast<double>(len);
          x[t] = level + std::sin(2.0 * std::numbers::pi * (cycles * u + phase)) + rng.normal();
        }
      } else {
        for (auto& v : x) v = rng.normal();
      }
      s.values.emplace_back(std::move(x));
    }
    d.segments.push_back(std::move(s));
  }

  for (std::size_t k = 0; k < o.duplicates.size(); ++k) {
    const auto src = o.duplicates[k];
    const auto id = d.descriptors.size();
    d.descriptors.push_back({id, d.descriptors[src].name + "_dup" + std::to_string(k), d.descriptors[src].kind});
    for (auto& s : d.segments) s.values.push_back(s.values[src]);
  }

  for (std::size_t i = 0; i < o.segments; ++i) d.train_ids.push_back(i);
  validate(d);
  return d;
}

} // namespace mtssel
