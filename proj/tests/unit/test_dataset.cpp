#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "mtssel/dataset.hpp"
#include "mtssel/errors.hpp"
#include "mtssel/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace mtssel;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

void write_minimal(const TempDir& dir) {
  write_file(dir / "meta.json", R"({"features":[{"name":"hr","kind":"timeseries"}]})");
  write_file(dir / "labels.csv", "segment_id,label\n0,a\n1,b\n");
  write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1.5\n0,1,2\n1,0,-3\n");
}

Dataset mixed_dataset() {
  Dataset d;
  d.descriptors = {{0, "hr", FeatureKind::TimeSeries}, {1, "age", FeatureKind::Scalar}, {2, "icu", FeatureKind::Categorical}};
  d.classes = {"alive", "dead"};
  for (std::size_t i = 0; i < 6; ++i) {
    Segment s;
    s.id = i;
    s.label = d.classes[i % 2];
    s.values.emplace_back(Series(i + 1, 0.1 * static_cast<double>(i) + 1.0 / 3.0));
    s.values.emplace_back(40.0 + static_cast<double>(i) / 7.0);
    s.values.emplace_back(i % 3 == 0 ? std::string("ICU,1") : std::string("icu\"2"));
    d.segments.push_back(s);
  }
  d.train_ids = {0, 1, 2, 3};
  d.test_ids = {4, 5};
  return d;
}

} // namespace

TEST_CASE("load_dataset reads a well-formed layout") {
  TempDir dir;
  write_minimal(dir);
  const auto d = load_dataset(dir.path());
  CHECK(d.num_segments() == 2);
  CHECK(d.num_features() == 1);
  CHECK(d.num_classes() == 2);
  CHECK(d.classes == std::vector<std::string>{"a", "b"});
  CHECK(std::get<Series>(d.segments[0].values[0]) == Series{1.5, 2.0});
  CHECK(std::get<Series>(d.segments[1].values[0]) == Series{-3.0});
  CHECK(d.train_ids == std::vector<std::size_t>{0, 1});
  CHECK(d.test_ids.empty());
}

TEST_CASE("class order follows first appearance in labels.csv") {
  TempDir dir;
  write_minimal(dir);
  write_file(dir / "labels.csv", "segment_id,label\n1,zeta\n0,alpha\n");
  const auto d = load_dataset(dir.path());
  CHECK(d.classes == std::vector<std::string>{"zeta", "alpha"});
  CHECK(d.label_index(0) == 1);
}

TEST_CASE("load_dataset errors name the offending file and row") {
  TempDir dir;
  write_minimal(dir);

  SUBCASE("missing labels file") {
    std::filesystem::remove(dir / "labels.csv");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("labels file not found"), InputError);
  }
  SUBCASE("segment lacking a feature value") {
    write_file(dir / "labels.csv", "segment_id,label\n0,a\n1,b\n2,a\n3,b\n");
    write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1\n1,0,1\n2,0,1\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("segment 3 (feature 'hr')"), InputError);
  }
  SUBCASE("unparsable value") {
    write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1\n1,0,abc\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("values/hr.csv:3"), InputError);
  }
  SUBCASE("non-finite value") {
    write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1\n1,0,nan\n");
    CHECK_THROWS_AS(load_dataset(dir.path()), InputError);
  }
  SUBCASE("unknown kind") {
    write_file(dir / "meta.json", R"({"features":[{"name":"hr","kind":"image"}]})");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("unknown feature kind"), InputError);
  }
  SUBCASE("segment id out of range in a value file") {
    write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1\n1,0,1\n5,0,1\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("out of range"), InputError);
  }
  SUBCASE("gap in sample index") {
    write_file(dir / "values/hr.csv", "segment_id,t,value\n0,0,1\n0,2,1\n1,0,1\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("segment 0"), InputError);
  }
  SUBCASE("single class") {
    write_file(dir / "labels.csv", "segment_id,label\n0,a\n1,a\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("at least 2 classes"), InputError);
  }
  SUBCASE("label rows do not cover the segments") {
    write_file(dir / "labels.csv", "segment_id,label\n0,a\n0,b\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.path()), doctest::Contains("duplicate segment_id"), InputError);
  }
}

TEST_CASE("write_dataset then load_dataset round-trips") {
  TempDir dir;
  const auto original = mixed_dataset();
  write_dataset(original, dir.path());
  CHECK(load_dataset(dir.path()) == original);

  SyntheticOptions o;
  o.segments = 12;
  o.noise = 2;
  o.informative = 2;
  o.duplicates = {1};
  o.seed = 99;
  const auto synthetic = gen_synthetic(o);
  TempDir dir2;
  write_dataset(synthetic, dir2.path());
  CHECK(load_dataset(dir2.path()) == synthetic);
}

TEST_CASE("validate rejects single-field corruptions") {
  const auto good = mixed_dataset();
  CHECK_NOTHROW(validate(good));
  std::vector<std::pair<const char*, std::function<void(Dataset&)>>> mutations = {
      {"label not a class", [](Dataset& d) { d.segments[2].label = "unknown"; }},
      {"wrong kind", [](Dataset& d) { d.segments[1].values[1] = std::string("x"); }},
      {"empty series", [](Dataset& d) { d.segments[0].values[0] = Series{}; }},
      {"nan scalar", [](Dataset& d) { d.segments[0].values[1] = std::nan(""); }},
      {"missing value", [](Dataset& d) { d.segments[3].values.pop_back(); }},
      {"descriptor id gap", [](Dataset& d) { d.descriptors[1].id = 5; }},
      {"segment id gap", [](Dataset& d) { d.segments[1].id = 9; }},
      {"duplicate feature name", [](Dataset& d) { d.descriptors[2].name = "hr"; }},
      {"overlapping split", [](Dataset& d) { d.test_ids.push_back(0); }},
      {"incomplete split", [](Dataset& d) { d.test_ids.pop_back(); }},
      {"one class", [](Dataset& d) {
         d.classes.pop_back();
         for (auto& s : d.segments) s.label = "alive";
       }},
      {"one segment", [](Dataset& d) {
         d.segments.resize(1);
         d.train_ids = {0};
         d.test_ids.clear();
       }},
  };
  for (const auto& [name, mutate] : mutations) {
    CAPTURE(name);
    auto bad = good;
    mutate(bad);
    CHECK_THROWS_AS(validate(bad), InputError);
  }
}

TEST_CASE("split is stratified, exhaustive and deterministic") {
  Dataset d = mixed_dataset();
  d.segments.resize(10);
  for (std::size_t i = 6; i < 10; ++i) {
    d.segments[i] = d.segments[i % 6];
    d.segments[i].id = i;
    d.segments[i].label = d.classes[i % 2];
  }
  d.train_ids.clear();
  d.test_ids.clear();
  for (std::size_t i = 0; i < 10; ++i) d.train_ids.push_back(i);

  const auto a = split(d, 0.5, 7);
  CHECK(a.train_ids.size() == 5);
  CHECK(a.test_ids.size() == 5);
  std::set<std::size_t> all(a.train_ids.begin(), a.train_ids.end());
  all.insert(a.test_ids.begin(), a.test_ids.end());
  CHECK(all.size() == 10);
  for (int c = 0; c < 2; ++c) {
    auto count = [&](const std::vector<std::size_t>& ids) {
      return std::count_if(ids.begin(), ids.end(), [&](std::size_t i) { return d.label_index(i) == c; });
    };
    CHECK(count(a.train_ids) >= 1);
    CHECK(count(a.test_ids) >= 1);
  }
  CHECK(split(d, 0.5, 7) == a);
  CHECK_NOTHROW(validate(a));

  SUBCASE("a class with one member cannot be stratified") {
    Dataset e = d;
    e.classes.push_back("lonely");
    e.segments[9].label = "lonely";
    CHECK_THROWS_WITH_AS(split(e, 0.5, 7), doctest::Contains("cannot stratify"), ParameterError);
  }
  SUBCASE("fraction outside (0,1)") { CHECK_THROWS_AS(split(d, 1.0, 7), ParameterError); }
}

TEST_CASE("value_hash ignores labels but sees values") {
  auto d = mixed_dataset();
  const auto h = value_hash(d);
  auto relabeled = d;
  relabeled.segments[0].label = "dead";
  CHECK(value_hash(relabeled) == h);
  auto changed = d;
  std::get<double>(changed.segments[0].values[1]) += 1e-12;
  CHECK(value_hash(changed) != h);
}
