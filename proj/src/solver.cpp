#include "mtssel/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mtssel/errors.hpp"

namespace mtssel {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void finish_design(FlatDesign& d) {
  const std::size_t m = d.columns.size();
  d.gram_diag.assign(m, 0.0);
  d.correlation.assign(m, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(m); ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    d.gram_diag[k] = dot(d.columns[k], d.columns[k]);
    d.correlation[k] = dot(d.columns[k], d.target);
  }
}

void check_dims(std::span<const double> alpha, const FlatDesign& design, const Matrix& qhat) {
  const std::size_t m = design.num_features();
  if (alpha.size() != m) throw ParameterError("alpha has " + std::to_string(alpha.size()) + " entries, design has " + std::to_string(m));
  if (qhat.rows() != m || qhat.cols() != m) throw ParameterError("penalty matrix must be " + std::to_string(m) + "x" + std::to_string(m));
}

double quad_form_row(const Matrix& q, std::span<const double> alpha, std::size_t k) {
  // (Q a)_k; Q symmetric so this is a^T Q_{.,k}.
  double s = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) s += q(j, k) * alpha[j];
  return s;
}

} // namespace

FlatDesign flatten(std::span<const SimilarityGraph> graphs, const SimilarityGraph& target) {
  const std::size_t n = target.size();
  FlatDesign d;
  d.length = n * n;
  const auto t = target.adjacency.data();
  d.target.assign(t.begin(), t.end());
  for (const auto& g : graphs) {
    if (g.size() != n || !g.adjacency.is_square()) throw ParameterError("flatten: graph size mismatch");
    const auto c = g.adjacency.data();
    d.columns.emplace_back(c.begin(), c.end());
  }
  finish_design(d);
  return d;
}

FlatDesign make_design(std::vector<std::vector<double>> columns, std::vector<double> target) {
  FlatDesign d;
  d.length = target.size();
  for (const auto& c : columns)
    if (c.size() != d.length) throw ParameterError("make_design: column length mismatch");
  d.columns = std::move(columns);
  d.target = std::move(target);
  finish_design(d);
  return d;
}

std::vector<double> residual(std::span<const double> alpha, const FlatDesign& design) {
  std::vector<double> r = design.target;
  for (std::size_t k = 0; k < design.num_features(); ++k) {
    if (alpha[k] == 0.0) continue;
    const auto& col = design.columns[k];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha[k] * col[i];
  }
  return r;
}

double objective(std::span<const double> alpha, const FlatDesign& design, const Matrix& qhat, double lambda, double beta) {
  check_dims(alpha, design, qhat);
  const auto r = residual(alpha, design);
  double l1 = 0.0;
  for (double a : alpha) l1 += std::abs(a);
  double quad = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) quad += alpha[k] * quad_form_row(qhat, alpha, k);
  return 0.5 * dot(r, r) + lambda * l1 + beta * quad;
}

double coordinate_gradient(std::span<const double> alpha, std::size_t k, const FlatDesign& design, const Matrix& qhat,
                           double beta, std::span<const double> residual) {
  if (k >= design.num_features()) throw ParameterError("coordinate index out of range");
  return -dot(design.columns[k], residual) + 2.0 * beta * quad_form_row(qhat, alpha, k);
}

double coordinate_gradient(std::span<const double> alpha, std::size_t k, const FlatDesign& design, const Matrix& qhat,
                           double beta) {
  check_dims(alpha, design, qhat);
  const auto r = residual(alpha, design);
  return coordinate_gradient(alpha, k, design, qhat, beta, r);
}

double prox_l1_nonneg(double x, double threshold) { return std::max(0.0, x - threshold); }

SolveResult solve(const FlatDesign& design, const Matrix& qhat, const SolveOptions& options) {
  const std::size_t m = design.num_features();
  if (!(options.lambda >= 0.0) || !(options.beta >= 0.0)) throw ParameterError("lambda and beta must be non-negative");
  SolveResult result{std::vector<double>(m, 0.0), {}, 0, false};
  check_dims(result.alpha, design, qhat);

  auto& alpha = result.alpha;
  std::vector<double> r = design.target;
  double previous = objective(alpha, design, qhat, options.lambda, options.beta);

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double g = coordinate_gradient(alpha, k, design, qhat, options.beta, r);
      const double z = design.gram_diag[k] + 2.0 * options.beta * qhat(k, k);
      if (!(z > 0.0)) {
        if (g + options.lambda < 0.0 || (alpha[k] > 0.0 && g + options.lambda != 0.0))
          throw InputError("degenerate coordinate " + std::to_string(k) + ": zero curvature with nonzero gradient");
        continue;
      }
      const double updated = prox_l1_nonneg(z * alpha[k] - g, options.lambda) / z;
      const double change = updated - alpha[k];
      if (change != 0.0) {
        const auto& col = design.columns[k];
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= change * col[i];
        alpha[k] = updated;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    const double current = objective(alpha, design, qhat, options.lambda, options.beta);
    result.objective_trace.push_back(current);
    result.sweeps_used = sweep + 1;
    if (current > previous + 1e-10 * std::abs(previous))
      throw ConsistencyError("objective increased from " + std::to_string(previous) + " to " + std::to_string(current) +
                             " at sweep " + std::to_string(sweep + 1));
    previous = current;
    double amax = 0.0;
    for (double a : alpha) amax = std::max(amax, std::abs(a));
    if (max_change <= options.tol * (1.0 + amax)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double lambda_max(const FlatDesign& design) {
  double lm = 0.0;
  for (double c : design.correlation) lm = std::max(lm, std::abs(c));
  return lm;
}

std::size_t support_size(std::span<const double> alpha, double support_epsilon) {
  return static_cast<std::size_t>(std::count_if(alpha.begin(), alpha.end(), [&](double a) { return a > support_epsilon; }));
}

TargetSizeResult solve_for_target_size(const FlatDesign& design, const Matrix& qhat, std::size_t target,
                                       SolveOptions options, double support_epsilon) {
  double lo = 0.0;
  double hi = lambda_max(design);
  if (target == 0) {
    options.lambda = hi;
    auto result = solve(design, qhat, options);
    const auto size = support_size(result.alpha, support_epsilon);
    return {std::move(result), hi, size, 1};
  }
  TargetSizeResult best;
  bool have_best = false;
  auto better = [&](std::size_t size) {
    if (!have_best) return true;
    const auto dist = [&](std::size_t s) { return s > target ? s - target : target - s; };
    if (dist(size) != dist(best.achieved_size)) return dist(size) < dist(best.achieved_size);
    return size < best.achieved_size;
  };
  for (std::size_t step = 1; step <= 30; ++step) {
    options.lambda = 0.5 * (lo + hi);
    auto result = solve(design, qhat, options);
    const auto size = support_size(result.alpha, support_epsilon);
    if (better(size)) {
      best = {std::move(result), options.lambda, size, step};
      have_best = true;
    }
    best.steps = step;
    if (size == target) break;
    if (size > target)
      lo = options.lambda;
    else
      hi = options.lambda;
  }
  return best;
}

} // namespace mtssel
