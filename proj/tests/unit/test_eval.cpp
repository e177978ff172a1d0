#include <doctest.h>

#include <cmath>

#include "mtssel/errors.hpp"
#include "mtssel/eval.hpp"
#include "mtssel/rng.hpp"

using namespace mtssel;

namespace {

DistanceMatrix random_distance(std::size_t n, CounterRng& rng, std::size_t id) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = rng.uniform() * 10.0;
  return {id, m};
}

} // namespace

TEST_CASE("aggregate examples") {
  CounterRng rng(1);
  const std::vector<DistanceMatrix> one{random_distance(5, rng, 0)};
  CHECK(aggregate(one).values == one[0].values);

  const std::vector<DistanceMatrix> two{random_distance(5, rng, 0), random_distance(5, rng, 1)};
  const std::vector<double> ones{1.0, 1.0};
  CHECK(aggregate(two, std::span<const double>(ones)).values == aggregate(two).values);

  const std::vector<double> w{2.0, 0.0};
  const auto weighted = aggregate(two, std::span<const double>(w));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(weighted.values(i, j) == 2.0 * two[0].values(i, j));
  CHECK(weighted.weights == w);
}

TEST_CASE("aggregate errors") {
  CounterRng rng(2);
  const std::vector<DistanceMatrix> none;
  CHECK_THROWS_AS(aggregate(none), InputError);
  const std::vector<DistanceMatrix> two{random_distance(4, rng, 0), random_distance(4, rng, 1)};
  const std::vector<double> neg{1.0, -0.5};
  CHECK_THROWS_AS(aggregate(two, std::span<const double>(neg)), InputError);
  const std::vector<double> short_w{1.0};
  CHECK_THROWS_AS(aggregate(two, std::span<const double>(short_w)), InputError);
  const std::vector<DistanceMatrix> mixed{random_distance(4, rng, 0), random_distance(3, rng, 1)};
  CHECK_THROWS_AS(aggregate(mixed), InputError);
}

TEST_CASE("uniform weights scale the unweighted sum") {
  CounterRng rng(3);
  const std::vector<DistanceMatrix> ms{random_distance(6, rng, 0), random_distance(6, rng, 1), random_distance(6, rng, 2)};
  const std::vector<double> w(3, 0.37);
  const auto weighted = aggregate(ms, std::span<const double>(w));
  const auto plain = aggregate(ms);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(weighted.values(i, j) == doctest::Approx(0.37 * plain.values(i, j)).epsilon(1e-15));
  CHECK(is_symmetric(plain.values));
}

TEST_CASE("graph complements") {
  const std::vector<SimilarityGraph> g{{Matrix::from_rows({{0, 1, 0.5}, {1, 0, 0}, {0.5, 0, 0}})}};
  CHECK(aggregate_graph_complements(g).values == Matrix::from_rows({{0, 0, 0.5}, {0, 0, 1}, {0.5, 1, 0}}));
}

TEST_CASE("nn1_classify examples") {
  const auto d = Matrix::from_rows({{0, 4, 1, 3}, {4, 0, 2, 2}, {1, 2, 0, 5}, {3, 2, 5, 0}});
  const std::vector<int> labels{0, 1, -1, -1};
  const std::vector<std::size_t> train{0, 1}, test{2, 3};
  CHECK(nn1_classify(d, train, test, labels) == std::vector<int>{0, 1});

  // Segment 2 is equidistant from both training segments; the smaller id wins.
  const auto tie = Matrix::from_rows({{0, 9, 1}, {9, 0, 1}, {1, 1, 0}});
  const std::vector<int> tie_labels{0, 1, -1};
  const std::vector<std::size_t> tie_train{1, 0}, tie_test{2};
  CHECK(nn1_classify(tie, tie_train, tie_test, tie_labels) == std::vector<int>{0});

  const std::vector<std::size_t> single{0}, rest{1, 2, 3};
  CHECK(nn1_classify(d, single, rest, labels) == std::vector<int>{0, 0, 0});

  const std::vector<std::size_t> empty;
  CHECK_THROWS_AS(nn1_classify(d, empty, rest, labels), InputError);
}

TEST_CASE("nn1 predictions are invariant under monotone transforms") {
  CounterRng rng(9);
  const auto d = random_distance(20, rng, 0).values;
  std::vector<int> labels(20);
  for (std::size_t i = 0; i < 20; ++i) labels[i] = static_cast<int>(i % 3);
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < 20; ++i) (i % 2 ? test : train).push_back(i);
  Matrix t = d;
  for (auto& x : t.data()) x = std::exp(0.3 * x) + 5.0;
  CHECK(nn1_classify(d, train, test, labels) == nn1_classify(t, train, test, labels));
}

TEST_CASE("accuracy") {
  CHECK(accuracy(std::vector<int>{0, 1}, std::vector<int>{0, 1}) == 1.0);
  CHECK(accuracy(std::vector<int>{1, 0}, std::vector<int>{0, 1}) == 0.0);
  CHECK(accuracy(std::vector<int>{0, 1, 1, 1}, std::vector<int>{0, 1, 1, 0}) == 0.75);
  CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), InputError);
  CHECK_THROWS_AS(accuracy(std::vector<int>{0}, std::vector<int>{0, 1}), InputError);
}
