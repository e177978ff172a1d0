#include "mtssel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "mtssel/csv.hpp"
#include "mtssel/errors.hpp"
#include "mtssel/rng.hpp"

namespace fs = std::filesystem;

namespace mtssel {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
  case FeatureKind::TimeSeries: return "timeseries";
  case FeatureKind::Scalar: return "scalar";
  case FeatureKind::Categorical: return "categorical";
  }
  return "unknown";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "timeseries") return FeatureKind::TimeSeries;
  if (text == "scalar") return FeatureKind::Scalar;
  if (text == "categorical") return FeatureKind::Categorical;
  throw InputError("unknown feature kind '" + std::string(text) + "'");
}

int Dataset::label_index(std::size_t segment) const {
  const auto& label = segments.at(segment).label;
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) throw InputError("segment " + std::to_string(segment) + ": unknown label '" + label + "'");
  return static_cast<int>(it - classes.begin());
}

std::vector<int> Dataset::label_indices(std::span<const std::size_t> ids) const {
  std::vector<int> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(label_index(id));
  return out;
}

std::vector<int> Dataset::label_indices() const {
  std::vector<int> out;
  out.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) out.push_back(label_index(i));
  return out;
}

namespace {

bool holds_kind(const FeatureValue& value, FeatureKind kind) {
  switch (kind) {
  case FeatureKind::TimeSeries: return std::holds_alternative<Series>(value);
  case FeatureKind::Scalar: return std::holds_alternative<double>(value);
  case FeatureKind::Categorical: return std::holds_alternative<std::string>(value);
  }
  return false;
}

bool valid_feature_name(const std::string& name) {
  return !name.empty() && name != "." && name != ".." && name.find_first_of("/\\") == std::string::npos;
}

} // namespace

void validate(const Dataset& d) {
  const std::size_t n = d.segments.size();
  const std::size_t m = d.descriptors.size();
  if (n < 2) throw InputError("dataset needs at least 2 segments, found " + std::to_string(n));
  if (m < 1) throw InputError("dataset needs at least 1 feature");
  if (d.classes.size() < 2) throw InputError("dataset needs at least 2 classes, found " + std::to_string(d.classes.size()));

  std::map<std::string, std::size_t> names;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& f = d.descriptors[j];
    if (f.id != j) throw InputError("feature ids must be contiguous: position " + std::to_string(j) + " has id " + std::to_string(f.id));
    if (!valid_feature_name(f.name)) throw InputError("invalid feature name '" + f.name + "'");
    if (!names.emplace(f.name, j).second) throw InputError("duplicate feature name '" + f.name + "'");
  }
  for (std::size_t c = 0; c < d.classes.size(); ++c)
    for (std::size_t c2 = c + 1; c2 < d.classes.size(); ++c2)
      if (d.classes[c] == d.classes[c2]) throw InputError("duplicate class token '" + d.classes[c] + "'");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = d.segments[i];
    if (s.id != i) throw InputError("segment ids must be contiguous: position " + std::to_string(i) + " has id " + std::to_string(s.id));
    if (std::find(d.classes.begin(), d.classes.end(), s.label) == d.classes.end())
      throw InputError("segment " + std::to_string(i) + ": label '" + s.label + "' is not a known class");
    if (s.values.size() != m)
      throw InputError("segment " + std::to_string(i) + ": expected " + std::to_string(m) + " values, found " + std::to_string(s.values.size()));
    for (std::size_t j = 0; j < m; ++j) {
      const auto& f = d.descriptors[j];
      const auto& v = s.values[j];
      const std::string where = "segment " + std::to_string(i) + ", feature '" + f.name + "'";
      if (!holds_kind(v, f.kind)) throw InputError(where + ": value does not match kind " + std::string(to_string(f.kind)));
      if (const auto* series = std::get_if<Series>(&v)) {
        if (series->empty()) throw InputError(where + ": length-0 series");
        for (double x : *series)
          if (!std::isfinite(x)) throw InputError(where + ": non-finite sample");
      } else if (const auto* x = std::get_if<double>(&v)) {
        if (!std::isfinite(*x)) throw InputError(where + ": non-finite value");
      }
    }
  }

  std::vector<int> seen(n, 0);
  for (auto id : d.train_ids) {
    if (id >= n) throw InputError("train id " + std::to_string(id) + " out of range");
    ++seen[id];
  }
  for (auto id : d.test_ids) {
    if (id >= n) throw InputError("test id " + std::to_string(id) + " out of range");
    ++seen[id];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i] != 1) throw InputError("segment " + std::to_string(i) + " must be in exactly one of train/test");
}

namespace {

std::string rel(const fs::path& root, const fs::path& p) { return fs::relative(p, root).generic_string(); }

std::size_t parse_segment_id(const std::string& text, const std::string& where, std::size_t n) {
  std::size_t id = 0;
  if (!csv::parse_size(text, id)) throw InputError(where + ": unparsable segment_id '" + text + "'");
  if (id >= n) throw InputError(where + ": segment_id " + std::to_string(id) + " out of range [0, " + std::to_string(n) + ")");
  return id;
}

void expect_header(const csv::Table& t, const std::vector<std::string>& header, const std::string& file) {
  if (t.header != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw InputError(file + ": expected header '" + want + "'");
  }
}

double parse_finite(const std::string& text, const std::string& where) {
  double x = 0;
  if (!csv::parse_double(text, x) || !std::isfinite(x)) throw InputError(where + ": unparsable value '" + text + "'");
  return x;
}

} // namespace

Dataset load_dataset(const fs::path& root) {
  const auto meta_path = root / "meta.json";
  const auto labels_path = root / "labels.csv";
  if (!fs::exists(meta_path)) throw InputError(meta_path.string() + ": meta file not found");
  if (!fs::exists(labels_path)) throw InputError(labels_path.string() + ": labels file not found");

  Dataset d;
  {
    std::ifstream in(meta_path);
    nlohmann::json meta;
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("meta.json: " + std::string(e.what()));
    }
    if (!meta.contains("features") || !meta["features"].is_array()) throw InputError("meta.json: missing 'features' array");
    std::size_t j = 0;
    for (const auto& f : meta["features"]) {
      if (!f.contains("name") || !f["name"].is_string() || !f.contains("kind") || !f["kind"].is_string())
        throw InputError("meta.json: feature " + std::to_string(j) + " needs string 'name' and 'kind'");
      FeatureKind kind;
      try {
        kind = parse_feature_kind(f["kind"].get<std::string>());
      } catch (const InputError& e) {
        throw InputError("meta.json: feature '" + f["name"].get<std::string>() + "': " + e.what());
      }
      d.descriptors.push_back({j++, f["name"].get<std::string>(), kind});
    }
  }

  const auto labels = csv::read(labels_path);
  expect_header(labels, {"segment_id", "label"}, "labels.csv");
  const std::size_t n = labels.rows.size();
  d.segments.resize(n);
  std::vector<bool> have(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string where = "labels.csv:" + std::to_string(labels.line_numbers[r]);
    const auto id = parse_segment_id(labels.rows[r][0], where, n);
    if (have[id]) throw InputError(where + ": duplicate segment_id " + std::to_string(id));
    have[id] = true;
    const auto& label = labels.rows[r][1];
    if (label.empty()) throw InputError(where + ": empty label");
    d.segments[id].id = id;
    d.segments[id].label = label;
    if (std::find(d.classes.begin(), d.classes.end(), label) == d.classes.end()) d.classes.push_back(label);
  }

  for (const auto& f : d.descriptors) {
    if (!valid_feature_name(f.name)) throw InputError("meta.json: invalid feature name '" + f.name + "'");
    const auto path = root / "values" / (f.name + ".csv");
    const auto file = rel(root, path);
    if (!fs::exists(path)) throw InputError(file + ": value file not found for feature '" + f.name + "'");
    const auto table = csv::read(path);
    std::vector<std::optional<FeatureValue>> values(n);

    if (f.kind == FeatureKind::TimeSeries) {
      expect_header(table, {"segment_id", "t", "value"}, file);
      std::vector<std::vector<std::pair<std::size_t, double>>> samples(n);
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string where = file + ":" + std::to_string(table.line_numbers[r]);
        const auto id = parse_segment_id(table.rows[r][0], where, n);
        std::size_t t = 0;
        if (!csv::parse_size(table.rows[r][1], t)) throw InputError(where + ": unparsable sample index '" + table.rows[r][1] + "'");
        samples[id].emplace_back(t, parse_finite(table.rows[r][2], where));
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto& s = samples[i];
        if (s.empty()) continue;
        std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Series series;
        series.reserve(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (s[k].first != k)
            throw InputError(file + ": segment " + std::to_string(i) + " has non-contiguous or duplicate sample index near t=" + std::to_string(k));
          series.push_back(s[k].second);
        }
        values[i] = std::move(series);
      }
    } else {
      expect_header(table, {"segment_id", "value"}, file);
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string where = file + ":" + std::to_string(table.line_numbers[r]);
        const auto id = parse_segment_id(table.rows[r][0], where, n);
        if (values[id]) throw InputError(where + ": duplicate value for segment " + std::to_string(id));
        if (f.kind == FeatureKind::Scalar)
          values[id] = parse_finite(table.rows[r][1], where);
        else
          values[id] = table.rows[r][1];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!values[i]) throw InputError(file + ": missing value for segment " + std::to_string(i) + " (feature '" + f.name + "')");
      d.segments[i].values.push_back(std::move(*values[i]));
    }
  }

  const auto split_path = root / "split.csv";
  if (fs::exists(split_path)) {
    const auto table = csv::read(split_path);
    expect_header(table, {"segment_id", "set"}, "split.csv");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string where = "split.csv:" + std::to_string(table.line_numbers[r]);
      const auto id = parse_segment_id(table.rows[r][0], where, n);
      if (table.rows[r][1] == "train")
        d.train_ids.push_back(id);
      else if (table.rows[r][1] == "test")
        d.test_ids.push_back(id);
      else
        throw InputError(where + ": set must be 'train' or 'test'");
    }
    std::sort(d.train_ids.begin(), d.train_ids.end());
    std::sort(d.test_ids.begin(), d.test_ids.end());
  } else {
    for (std::size_t i = 0; i < n; ++i) d.train_ids.push_back(i);
  }

  validate(d);
  return d;
}

void write_dataset(const Dataset& d, const fs::path& root) {
  fs::create_directories(root / "values");
  {
    nlohmann::json meta;
    meta["features"] = nlohmann::json::array();
    for (const auto& f : d.descriptors) meta["features"].push_back({{"name", f.name}, {"kind", to_string(f.kind)}});
    std::ofstream out(root / "meta.json", std::ios::binary);
    out << meta.dump(2) << '\n';
  }
  {
    std::ofstream out(root / "labels.csv", std::ios::binary);
    out << "segment_id,label\n";
    for (const auto& s : d.segments) out << s.id << ',' << csv::quote(s.label) << '\n';
  }
  for (const auto& f : d.descriptors) {
    std::ofstream out(root / "values" / (f.name + ".csv"), std::ios::binary);
    out << (f.kind == FeatureKind::TimeSeries ? "segment_id,t,value\n" : "segment_id,value\n");
    for (const auto& s : d.segments) {
      const auto& v = s.values[f.id];
      if (const auto* series = std::get_if<Series>(&v)) {
        for (std::size_t t = 0; t < series->size(); ++t) out << s.id << ',' << t << ',' << csv::format_double((*series)[t]) << '\n';
      } else if (const auto* x = std::get_if<double>(&v)) {
        out << s.id << ',' << csv::format_double(*x) << '\n';
      } else {
        out << s.id << ',' << csv::quote(std::get<std::string>(v)) << '\n';
      }
    }
  }
  const auto split_path = root / "split.csv";
  if (!d.test_ids.empty()) {
    std::vector<std::pair<std::size_t, const char*>> rows;
    for (auto id : d.train_ids) rows.emplace_back(id, "train");
    for (auto id : d.test_ids) rows.emplace_back(id, "test");
    std::sort(rows.begin(), rows.end());
    std::ofstream out(split_path, std::ios::binary);
    out << "segment_id,set\n";
    for (const auto& [id, set] : rows) out << id << ',' << set << '\n';
  } else if (fs::exists(split_path)) {
    fs::remove(split_path);
  }
}

Dataset split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ParameterError("train fraction must lie in (0, 1), got " + csv::format_double(train_fraction));
  Dataset out = dataset;
  out.train_ids.clear();
  out.test_ids.clear();
  const auto labels = dataset.label_indices();
  const std::size_t num_classes = dataset.classes.size();
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
  for (std::size_t c = 0; c < num_classes; ++c)
    if (members[c].size() < 2)
      throw ParameterError("cannot stratify: class '" + dataset.classes[c] + "' has " + std::to_string(members[c].size()) +
                           " segment(s)");

  // Largest-remainder allocation of round(fraction * n) training slots, so
  // the overall split matches the fraction rather than a sum of per-class roundings.
  const auto total = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(labels.size())));
  std::vector<std::size_t> quota(num_classes);
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = train_fraction * static_cast<double>(members[c].size());
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainder.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::sort(remainder.begin(), remainder.end());
  for (std::size_t r = 0; assigned < total && r < remainder.size(); ++r, ++assigned) ++quota[remainder[r].second];

  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& ids = members[c];
    CounterRng rng(derive_seed(seed, Stream::Split, c));
    rng.shuffle(ids);
    const std::size_t n_train = std::clamp<std::size_t>(quota[c], 1, ids.size() - 1);
    out.train_ids.insert(out.train_ids.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_ids.insert(out.test_ids.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  }
  std::sort(out.train_ids.begin(), out.train_ids.end());
  std::sort(out.test_ids.begin(), out.test_ids.end());
  return out;
}

Dataset permute_features(const Dataset& dataset, std::span<const std::size_t> order) {
  Dataset out = dataset;
  out.descriptors.clear();
  for (std::size_t j = 0; j < order.size(); ++j) {
    auto f = dataset.descriptors.at(order[j]);
    f.id = j;
    out.descriptors.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    out.segments[i].values.clear();
    for (auto j : order) out.segments[i].values.push_back(dataset.segments[i].values.at(j));
  }
  return out;
}

namespace {

class Fnv1a {
public:
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, sizeof v);
    u64(v);
  }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return h_; }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

} // namespace

std::uint64_t value_hash(const Dataset& d) {
  Fnv1a h;
  h.u64(d.descriptors.size());
  for (const auto& f : d.descriptors) {
    h.str(f.name);
    h.u64(static_cast<std::uint64_t>(f.kind));
  }
  h.u64(d.segments.size());
  for (const auto& s : d.segments) {
    for (const auto& v : s.values) {
      if (const auto* series = std::get_if<Series>(&v)) {
        h.u64(series->size());
        for (double x : *series) h.f64(x);
      } else if (const auto* x = std::get_if<double>(&v)) {
        h.f64(*x);
      } else {
        h.str(std::get<std::string>(v));
      }
    }
  }
  return h.value();
}

} // namespace mtssel
