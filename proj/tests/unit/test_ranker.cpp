#include <doctest.h>

#include "mtssel/errors.hpp"
#include "mtssel/ranker.hpp"
#include "mtssel/rng.hpp"
#include "mtssel/synthetic.hpp"

using namespace mtssel;

namespace {

// Feature 0: class indicator scalar. Feature 1: Gaussian noise scalar.
Dataset indicator_vs_noise(std::uint64_t seed, bool duplicate_indicator = false) {
  CounterRng rng(derive_seed(seed, Stream::Synthetic, 77));
  Dataset d;
  d.descriptors = {{0, "indicator", FeatureKind::Scalar}, {1, "noise", FeatureKind::Scalar}};
  if (duplicate_indicator) d.descriptors.push_back({2, "indicator_copy", FeatureKind::Scalar});
  d.classes = {"a", "b"};
  for (std::size_t i = 0; i < 60; ++i) {
    Segment s{i, {}, d.classes[i % 2]};
    s.values.emplace_back(static_cast<double>(i % 2));
    s.values.emplace_back(rng.normal());
    if (duplicate_indicator) s.values.emplace_back(static_cast<double>(i % 2));
    d.segments.push_back(std::move(s));
    d.train_ids.push_back(i);
  }
  return d;
}

} // namespace

TEST_CASE("order_by_score breaks ties by id") {
  CHECK(order_by_score(std::vector<double>{0.2, 0.5, 0.5, 0.1}) == std::vector<std::size_t>{1, 2, 0, 3});
}

TEST_CASE("single feature ranks first") {
  auto d = indicator_vs_noise(1);
  d.descriptors.resize(1);
  for (auto& s : d.segments) s.values.resize(1);
  const auto r = pie_rank(d, {});
  CHECK(r.order == std::vector<std::size_t>{0});
}

TEST_CASE("class indicator outranks noise") {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RankOptions o;
    o.seed = seed;
    const auto r = pie_rank(indicator_vs_noise(seed), o);
    if (r.scores[0] > r.scores[1] && r.order[0] == 0) ++wins;
    for (double s : r.scores) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0 + 1e-12);
    }
  }
  CHECK(wins >= 9);
}

TEST_CASE("duplicated features score identically") {
  const auto r = pie_rank(indicator_vs_noise(3, true), {});
  CHECK(r.scores[0] == r.scores[2]);
  const auto pos0 = std::find(r.order.begin(), r.order.end(), 0);
  const auto pos2 = std::find(r.order.begin(), r.order.end(), 2);
  CHECK(pos0 < pos2);
}

TEST_CASE("feature permutation permutes scores") {
  SyntheticOptions so;
  so.segments = 30;
  so.informative = 2;
  so.noise = 3;
  so.seed = 5;
  const auto d = gen_synthetic(so);
  const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
  RankOptions o;
  o.knn_k = 5;
  const auto base = pie_rank(d, o);
  const auto permuted = pie_rank(permute_features(d, perm), o);
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(permuted.scores[i] == base.scores[perm[i]]);
}

TEST_CASE("affine rescaling of a scalar feature leaves its score unchanged") {
  auto d = indicator_vs_noise(4);
  const auto base = pie_rank(d, {});
  for (auto& s : d.segments) std::get<double>(s.values[1]) = 3.0 * std::get<double>(s.values[1]) + 7.0;
  CHECK(pie_rank(d, {}).scores[1] == base.scores[1]);
}

TEST_CASE("ranking ignores test segments") {
  auto d = indicator_vs_noise(6);
  d.train_ids.clear();
  d.test_ids.clear();
  for (std::size_t i = 0; i < 60; ++i) (i < 40 ? d.train_ids : d.test_ids).push_back(i);
  const auto base = pie_rank(d, {});
  auto poisoned = d;
  for (auto id : poisoned.test_ids) poisoned.segments[id].label = poisoned.segments[id].label == "a" ? "b" : "a";
  CHECK(pie_rank(poisoned, {}).scores == base.scores);
}

TEST_CASE("average_scores") {
  RankResult a{{1.0, 0.0}, {0, 1}}, b{{0.0, 1.0}, {1, 0}};
  const std::vector<RankResult> one{a};
  CHECK(average_scores(one).scores == a.scores);
  const std::vector<RankResult> two{a, b};
  const auto avg = average_scores(two);
  CHECK(avg.scores == std::vector<double>{0.5, 0.5});
  CHECK(avg.order == std::vector<std::size_t>{0, 1});

  RankResult c{{0.1, 0.7, 0.3}, {1, 2, 0}};
  const std::vector<RankResult> copies(7, c);
  const auto same = average_scores(copies);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same.scores[i] == doctest::Approx(c.scores[i]).epsilon(1e-15));
  CHECK(same.order == c.order);

  const std::vector<RankResult> mismatched{a, c};
  CHECK_THROWS_AS(average_scores(mismatched), InputError);
}
