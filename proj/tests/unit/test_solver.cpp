#include <doctest.h>

#include <cmath>

#include "mtssel/errors.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/rng.hpp"
#include "mtssel/solver.hpp"
#include "support/oracles.hpp"

using namespace mtssel;

namespace {

struct Instance {
  std::vector<std::vector<double>> cols;
  std::vector<double> target;
  Matrix q;
};

// PSD penalty q = B^T B + small diagonal; nonnegative columns like real graphs.
Instance random_instance(std::size_t m, std::size_t len, CounterRng& rng) {
  Instance in;
  in.cols.assign(m, std::vector<double>(len));
  for (auto& c : in.cols)
    for (auto& x : c) x = rng.uniform() < 0.4 ? 0.0 : rng.uniform();
  in.target.resize(len);
  for (auto& x : in.target) x = rng.uniform() < 0.5 ? 0.0 : 1.0;
  Matrix b(m, m);
  for (auto& x : b.data()) x = rng.uniform() - 0.5;
  in.q = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) in.q(i, j) += b(k, i) * b(k, j);
      if (i == j) in.q(i, j) += 1e-3;
    }
  return in;
}

} // namespace

TEST_CASE("flatten is row-major") {
  const std::vector<SimilarityGraph> g{{Matrix::from_rows({{0, 1}, {1, 0}})}, {Matrix(2, 2)}};
  const auto d = flatten(g, {Matrix::from_rows({{0, 0.5}, {0.5, 0}})});
  CHECK(d.columns[0] == std::vector<double>{0, 1, 1, 0});
  CHECK(d.columns[1] == std::vector<double>{0, 0, 0, 0});
  CHECK(d.gram_diag == std::vector<double>{2, 0});
  CHECK(d.correlation == std::vector<double>{1, 0});
  CHECK(d.length == 4);
  const std::vector<SimilarityGraph> bad{{Matrix(3, 3)}};
  CHECK_THROWS_AS(flatten(bad, {Matrix(2, 2)}), InputError);
}

TEST_CASE("objective examples") {
  const auto d = make_design({{1, 0}}, {1, 0});
  const auto q = Matrix::from_rows({{1}});
  CHECK(objective(std::vector<double>{1}, d, q, 0.0, 1.0) == 1.0);
  CHECK(objective(std::vector<double>{0}, d, q, 0.0, 1.0) == 0.5);
  CHECK(objective(std::vector<double>{0}, d, q, 0.0, 1.0) ==
        oracle::objective({0}, {{1, 0}}, {1, 0}, q, 0.0, 1.0));
  CHECK_THROWS_AS(objective(std::vector<double>{0, 1}, d, q, 0.0, 1.0), InputError);
}

TEST_CASE("coordinate gradient examples") {
  const auto d = make_design({{1, 0}}, {1, 0});
  const auto q = Matrix::from_rows({{1}});
  CHECK(coordinate_gradient(std::vector<double>{0}, 0, d, q, 1.0) == -1.0);
  CounterRng rng(3);
  const auto in = random_instance(4, 9, rng);
  const auto d2 = make_design(in.cols, in.target);
  for (std::size_t k = 0; k < 4; ++k) CHECK(coordinate_gradient(std::vector<double>(4, 0.0), k, d2, in.q, 2.0) == -d2.correlation[k]);
}

TEST_CASE("coordinate gradient matches central finite differences") {
  CounterRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng.below(5);
    const auto in = random_instance(m, 4 + rng.below(12), rng);
    const auto d = make_design(in.cols, in.target);
    std::vector<double> a(m);
    for (auto& x : a) x = rng.uniform();
    const double beta = rng.uniform() * 2.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double h = 1e-5;
      auto ap = a, am = a;
      ap[k] += h;
      am[k] -= h;
      const double fd = (objective(ap, d, in.q, 0.0, beta) - objective(am, d, in.q, 0.0, beta)) / (2 * h);
      CHECK(std::abs(coordinate_gradient(a, k, d, in.q, beta) - fd) <= 1e-6);
      const auto r = residual(a, d);
      CHECK(coordinate_gradient(a, k, d, in.q, beta, r) == coordinate_gradient(a, k, d, in.q, beta));
    }
  }
}

TEST_CASE("prox_l1_nonneg") {
  CHECK(prox_l1_nonneg(0.5, 0.2) == doctest::Approx(0.3));
  CHECK(prox_l1_nonneg(-0.5, 0.2) == 0.0);
  CHECK(prox_l1_nonneg(0.1, 0.2) == 0.0);
}

TEST_CASE("solve worked examples") {
  SUBCASE("scalar least squares") {
    const auto d = make_design({{1, 0, 1, 0}}, {2, 0, 2, 0});
    SolveOptions o;
    o.beta = 0.0;
    const auto r = solve(d, Matrix::from_rows({{1}}), o);
    CHECK(r.alpha[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.converged);
  }
  SUBCASE("lambda at lambda_max yields zero after one sweep") {
    CounterRng rng(2);
    const auto in = random_instance(4, 16, rng);
    const auto d = make_design(in.cols, in.target);
    SolveOptions o;
    o.lambda = lambda_max(d);
    const auto r = solve(d, in.q, o);
    CHECK(r.alpha == std::vector<double>(4, 0.0));
    CHECK(r.sweeps_used == 1);
  }
  SUBCASE("degenerate coordinate") {
    const auto d = make_design({{0, 0}}, {1, 0});
    // Zero column and zero penalty: curvature zero, gradient zero, harmless.
    CHECK_NOTHROW(solve(d, Matrix::from_rows({{0}}), {}));
    // Nonzero gradient through a negative penalty row with zero curvature.
    const auto d2 = make_design({{0, 0}, {1, 0}}, {1, 0});
    SolveOptions o;
    o.lambda = 0.0;
    CHECK_THROWS_WITH_AS(solve(d2, Matrix::from_rows({{0, -1}, {-1, 1}}), o), doctest::Contains("degenerate coordinate"),
                         InputError);
  }
}

TEST_CASE("duplicate columns under a full redundancy penalty") {
  // H1 == H2 and identical penalty rows: fit, l1 and penalty see only
  // alpha1 + alpha2, so the objective is flat along the pair.
  const std::vector<std::vector<double>> cols{{1, 0, 1, 1}, {1, 0, 1, 1}};
  const std::vector<double> target{1, 0, 1, 0};
  const auto q = Matrix::from_rows({{1, 1}, {1, 1}});
  const auto d = make_design(cols, target);
  SolveOptions o;
  o.beta = 5.0;
  o.lambda = 0.1;
  const auto r = solve(d, q, o);
  std::vector<double> best;
  const double oracle_min = oracle::grid_search_min(cols, target, q, o.lambda, o.beta, 3.0, 1e-3, &best);
  CHECK(r.final_objective() <= oracle_min + 2e-3);
  CHECK(std::abs(r.final_objective() - oracle::objective(r.alpha, cols, target, q, o.lambda, o.beta)) <= 1e-12);
  const double total = r.alpha[0] + r.alpha[1];
  CHECK(total > 0.0);
  for (double share : {0.0, 0.3, 1.0})
    CHECK(oracle::objective({share * total, (1 - share) * total}, cols, target, q, o.lambda, o.beta) ==
          doctest::Approx(r.final_objective()).epsilon(1e-12));
}

TEST_CASE("random instances: monotone, KKT, oracle agreement") {
  CounterRng rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.below(3);
    const auto in = random_instance(m, 16, rng);
    const auto d = make_design(in.cols, in.target);
    SolveOptions o;
    o.lambda = rng.uniform() * 0.5 * lambda_max(d);
    o.beta = rng.uniform();
    const auto r = solve(d, in.q, o);
    REQUIRE(r.converged);
    for (std::size_t s = 1; s < r.objective_trace.size(); ++s)
      CHECK(r.objective_trace[s] <= r.objective_trace[s - 1] + 1e-10 * std::abs(r.objective_trace[s - 1]));
    for (std::size_t k = 0; k < m; ++k) {
      CHECK(r.alpha[k] >= 0.0);
      const double g = coordinate_gradient(r.alpha, k, d, in.q, o.beta);
      const double scale = 1.0 + std::abs(g);
      if (r.alpha[k] > 0.0) CHECK(std::abs(g + o.lambda) <= 1e-6 * scale);
      else CHECK(g + o.lambda >= -1e-6 * scale);
    }
    const double grid = oracle::grid_search_min(in.cols, in.target, in.q, o.lambda, o.beta);
    CHECK(std::abs(r.final_objective() - grid) <= 2e-3);
    // Bitwise determinism.
    CHECK(solve(d, in.q, o).alpha == r.alpha);
  }
}

TEST_CASE("target size bisection") {
  CounterRng rng(77);
  const auto in = random_instance(6, 25, rng);
  const auto d = make_design(in.cols, in.target);
  SolveOptions o;
  o.beta = 0.1;
  const auto full = solve(d, in.q, o);
  const auto full_size = support_size(full.alpha, 1e-9);
  for (std::size_t target = 0; target <= full_size; ++target) {
    const auto r = solve_for_target_size(d, in.q, target, o, 1e-9);
    CHECK(r.achieved_size == support_size(r.solve.alpha, 1e-9));
    CHECK(r.steps <= 30);
    CHECK(r.lambda >= 0.0);
    CHECK(r.lambda <= lambda_max(d));
  }
  CHECK(solve_for_target_size(d, in.q, 0, o, 1e-9).achieved_size == 0);
}

TEST_CASE("support size threshold") {
  CHECK(support_size(std::vector<double>{0.0, 1e-9, 2e-9, 1.0}, 1e-9) == 2);
}
