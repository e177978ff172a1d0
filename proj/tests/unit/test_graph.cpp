#include <doctest.h>

#include "mtssel/errors.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/rng.hpp"

using namespace mtssel;

namespace {

Matrix random_distances(std::size_t n, std::uint64_t seed, int levels) {
  CounterRng rng(seed);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = static_cast<double>(rng.below(levels));
  return m;
}

} // namespace

TEST_CASE("knn_graph examples") {
  const auto m = Matrix::from_rows({{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
  CHECK(knn_graph(m, 1) == Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {1, 0, 0}}));
  CHECK(knn_graph(m, 2) == Matrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  const auto flat = Matrix::from_rows({{0, 5, 5, 5}, {5, 0, 5, 5}, {5, 5, 0, 5}, {5, 5, 5, 0}});
  const auto g = knn_graph(flat, 2);
  CHECK(g.row(0)[1] == 1.0);
  CHECK(g.row(0)[2] == 1.0);
  CHECK(g.row(3)[0] == 1.0);
  CHECK(g.row(3)[1] == 1.0);
}

TEST_CASE("knn_graph rejects bad k") {
  const auto m = Matrix::from_rows({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(knn_graph(m, 2), ParameterError);
  CHECK_THROWS_AS(knn_graph(m, 0), ParameterError);
}

TEST_CASE("knn_graph rows have exactly k ones and match the serial reference") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 5 + seed % 17;
    const auto m = random_distances(n, seed, 3); // coarse levels force ties
    for (std::size_t k : {std::size_t{1}, n / 2, n - 1}) {
      if (k == 0) continue;
      const auto g = knn_graph(m, k);
      CHECK(g == knn_graph_serial(m, k));
      for (std::size_t i = 0; i < n; ++i) {
        double ones = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          CHECK((g(i, j) == 0.0 || g(i, j) == 1.0));
          ones += g(i, j);
        }
        CHECK(ones == static_cast<double>(k));
        CHECK(g(i, i) == 0.0);
        // Every chosen neighbor is at least as close as every skipped one.
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (a != i && b != i && g(i, a) == 1.0 && g(i, b) == 0.0) {
              CHECK(m(i, a) <= m(i, b));
              if (m(i, a) == m(i, b)) CHECK(a < b);
            }
      }
    }
  }
}

TEST_CASE("symmetrize examples") {
  const auto one_way = symmetrize(Matrix::from_rows({{0, 1}, {0, 0}}));
  CHECK(one_way.adjacency == Matrix::from_rows({{0, 0.5}, {0.5, 0}}));
  const auto mutual = symmetrize(Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(mutual.adjacency == Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(symmetrize(Matrix::identity(3)).adjacency == Matrix(3, 3));
}

TEST_CASE("symmetrized knn graphs are valid similarity graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = symmetrize(knn_graph(random_distances(12, seed, 100), 3));
    CHECK(is_symmetric(g.adjacency));
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(g.adjacency(i, i) == 0.0);
      double deg = 0.0;
      for (double w : g.adjacency.row(i)) {
        CHECK((w == 0.0 || w == 0.5 || w == 1.0));
        deg += w;
      }
      CHECK(deg > 0.0);
    }
  }
}

TEST_CASE("label_graph") {
  CHECK(label_graph(std::vector<int>{0, 0, 1}).adjacency == Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}));
  CHECK(label_graph(std::vector<int>{0, 1, 2}).adjacency == Matrix(3, 3));
  CHECK(label_graph(std::vector<int>{0, 1, 0, 1}).adjacency ==
        Matrix::from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
  CHECK_THROWS_WITH_AS(label_graph(std::vector<int>{1, 1, 1}), doctest::Contains("degenerate label graph"), InputError);
}

TEST_CASE("row_normalize") {
  CHECK(row_normalize({Matrix::from_rows({{0, 1}, {1, 0}})}).matrix == Matrix::from_rows({{0, 1}, {1, 0}}));
  const auto n = row_normalize({Matrix::from_rows({{0, 0.5, 0.5}, {0.5, 0, 0}, {0.5, 0, 0}})}).matrix;
  CHECK(n == Matrix::from_rows({{0, 0.5, 0.5}, {1, 0, 0}, {1, 0, 0}}));
  CHECK_THROWS_WITH_AS(row_normalize({Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}})}),
                       doctest::Contains("vertex 2"), InputError);

  const auto g = symmetrize(knn_graph(random_distances(15, 9, 50), 4));
  const auto p = row_normalize(g).matrix;
  for (std::size_t i = 0; i < 15; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 15; ++j) {
      sum += p(i, j);
      CHECK((p(i, j) == 0.0) == (g.adjacency(i, j) == 0.0));
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}
