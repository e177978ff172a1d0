#include "mtssel/distance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mtssel/csv.hpp"
#include "mtssel/errors.hpp"
#include "mtssel/rng.hpp"

namespace fs = std::filesystem;

namespace mtssel {

namespace {

void check_series(std::span<const double> s, const char* which) {
  if (s.empty()) throw InputError(std::string("dtw: empty sequence ") + which);
  for (double x : s)
    if (!std::isfinite(x)) throw InputError(std::string("dtw: non-finite value in sequence ") + which);
}

} // namespace

double dtw(std::span<const double> s, std::span<const double> t, std::optional<std::size_t> window) {
  check_series(s, "s");
  check_series(t, "t");
  const std::size_t ns = s.size();
  const std::size_t nt = t.size();
  std::size_t w = nt + ns;
  if (window) w = std::max(*window, ns > nt ? ns - nt : nt - ns);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(nt, inf);
  std::vector<double> curr(nt, inf);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(nt, i + w + 1);
    std::fill(curr.begin(), curr.end(), inf);
    for (std::size_t j = lo; j < hi; ++j) {
      const double cost = std::abs(s[i] - t[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (i > 0) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, curr[j - 1]);
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      }
      curr[j] = best + cost;
    }
    std::swap(prev, curr);
  }
  return prev[nt - 1];
}

double scalar_distance(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("scalar_distance: non-finite input");
  return std::abs(a - b);
}

double categorical_distance(std::string_view a, std::string_view b) { return a == b ? 0.0 : 1.0; }

std::vector<double> znormalize(std::span<const double> series) {
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(series.size(), 0.0);
  if (sd > 0.0)
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - mean) / sd;
  return out;
}

namespace {

// Per-segment values prepared once (validated, optionally z-normalized), so the
// pair loop cannot throw.
struct Prepared {
  FeatureKind kind;
  std::vector<std::vector<double>> series;
  std::vector<double> scalars;
  std::vector<const std::string*> tokens;
};

Prepared prepare(const Dataset& dataset, std::size_t feature_id, const DistanceOptions& options) {
  if (feature_id >= dataset.num_features())
    throw ParameterError("feature id " + std::to_string(feature_id) + " out of range");
  const auto& f = dataset.descriptors[feature_id];
  Prepared p{f.kind, {}, {}, {}};
  const std::size_t n = dataset.num_segments();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = dataset.segments[i].values.at(feature_id);
    const std::string where = "segment " + std::to_string(i) + ", feature '" + f.name + "'";
    switch (f.kind) {
    case FeatureKind::TimeSeries: {
      const auto& s = std::get<Series>(v);
      if (s.empty()) throw InputError(where + ": empty sequence");
      for (double x : s)
        if (!std::isfinite(x)) throw InputError(where + ": non-finite value");
      p.series.push_back(options.znorm ? znormalize(s) : s);
      break;
    }
    case FeatureKind::Scalar: {
      const double x = std::get<double>(v);
      if (!std::isfinite(x)) throw InputError(where + ": non-finite value");
      p.scalars.push_back(x);
      break;
    }
    case FeatureKind::Categorical: p.tokens.push_back(&std::get<std::string>(v)); break;
    }
  }
  return p;
}

double cell(const Prepared& p, std::size_t i, std::size_t j, const DistanceOptions& options) {
  switch (p.kind) {
  case FeatureKind::TimeSeries: return dtw(p.series[i], p.series[j], options.dtw_window);
  case FeatureKind::Scalar: return std::abs(p.scalars[i] - p.scalars[j]);
  case FeatureKind::Categorical: return categorical_distance(*p.tokens[i], *p.tokens[j]);
  }
  return 0.0;
}

} // namespace

DistanceMatrix distance_matrix(const Dataset& dataset, std::size_t feature_id, const DistanceOptions& options) {
  const auto p = prepare(dataset, feature_id, options);
  const std::size_t n = dataset.num_segments();
  DistanceMatrix out{feature_id, Matrix(n, n)};
  const auto rows = static_cast<std::ptrdiff_t>(n);
  // Row i holds n-1-i pairs; dynamic scheduling balances the triangle.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto i = static_cast<std::size_t>(r);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cell(p, i, j, options);
      out.values(i, j) = d;
      out.values(j, i) = d;
    }
  }
  return out;
}

DistanceMatrix distance_matrix_serial(const Dataset& dataset, std::size_t feature_id, const DistanceOptions& options) {
  const auto p = prepare(dataset, feature_id, options);
  const std::size_t n = dataset.num_segments();
  DistanceMatrix out{feature_id, Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cell(p, i, j, options);
      out.values(i, j) = d;
      out.values(j, i) = d;
    }
  }
  return out;
}

DistanceMatrix submatrix(const DistanceMatrix& full, std::span<const std::size_t> ids) {
  DistanceMatrix out{full.feature_id, Matrix(ids.size(), ids.size())};
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = 0; b < ids.size(); ++b) out.values(a, b) = full.values(ids[a], ids[b]);
  return out;
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  // Write to a temporary then rename, so a concurrent reader never sees a partial file.
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError(tmp.string() + ": cannot write");
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << csv::format_double(m(i, j));
      }
      out << '\n';
    }
  }
  fs::rename(tmp, path);
}

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& field : csv::split_line(line)) {
      double x = 0;
      if (!csv::parse_double(field, x))
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": unparsable value '" + field + "'");
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

std::uint64_t DistanceCache::key(const Dataset& dataset, const DistanceOptions& options) {
  std::uint64_t k = value_hash(dataset);
  k = splitmix64(k ^ (options.dtw_window ? *options.dtw_window + 1 : 0));
  k = splitmix64(k ^ (options.znorm ? 1 : 0));
  return k;
}

fs::path DistanceCache::path(std::uint64_t key, std::size_t feature_id) const {
  std::ostringstream dir;
  dir << std::hex << std::setw(16) << std::setfill('0') << key;
  return root_ / dir.str() / ("M_" + std::to_string(feature_id) + ".csv");
}

std::optional<DistanceMatrix> DistanceCache::load(std::uint64_t key, std::size_t feature_id, std::size_t n) const {
  const auto p = path(key, feature_id);
  if (!fs::exists(p)) return std::nullopt;
  try {
    auto m = read_matrix_csv(p);
    if (m.rows() != n || m.cols() != n) return std::nullopt;
    return DistanceMatrix{feature_id, std::move(m)};
  } catch (const InputError&) {
    return std::nullopt; // corrupt entry: recompute
  }
}

void DistanceCache::store(std::uint64_t key, const DistanceMatrix& matrix) const {
  write_matrix_csv(matrix.values, path(key, matrix.feature_id));
}

std::vector<DistanceMatrix> all_distance_matrices(const Dataset& dataset, const DistanceOptions& options,
                                                  const DistanceCache* cache) {
  std::vector<DistanceMatrix> out;
  out.reserve(dataset.num_features());
  const auto key = cache ? DistanceCache::key(dataset, options) : 0;
  for (std::size_t j = 0; j < dataset.num_features(); ++j) {
    if (cache) {
      if (auto hit = cache->load(key, j, dataset.num_segments())) {
        out.push_back(std::move(*hit));
        continue;
      }
    }
    out.push_back(distance_matrix(dataset, j, options));
    if (cache) cache->store(key, out.back());
  }
  return out;
}

} // namespace mtssel
