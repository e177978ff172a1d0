#include "mtssel/select.hpp"

#include "mtssel/errors.hpp"
#include "mtssel/graph.hpp"
#include "mtssel/log.hpp"
#include "mtssel/pipeline.hpp"
#include "mtssel/solver.hpp"

namespace mtssel {

std::vector<std::size_t> support(std::span<const double> alpha) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < alpha.size(); ++k)
    if (alpha[k] > kSupportEpsilon) out.push_back(k);
  return out;
}

SelectionResult pie_ss(std::span<const DistanceMatrix> distances, std::span<const int> labels, int num_classes,
                       const SelectOptions& options) {
  if (options.lambda.has_value() == options.target_size.has_value())
    throw ParameterError("exactly one of lambda or target size must be given");
  if (options.lambda && !(*options.lambda >= 0.0)) throw ParameterError("lambda must be non-negative");
  if (!(options.beta >= 0.0)) throw ParameterError("beta must be non-negative");
  const std::size_t m = distances.size();
  if (options.target_size && *options.target_size > m)
    throw ParameterError("target size " + std::to_string(*options.target_size) + " exceeds the " + std::to_string(m) +
                         " available features");
  if (options.nystrom_landmarks && *options.nystrom_landmarks > m)
    throw ParameterError("nystrom landmark count " + std::to_string(*options.nystrom_landmarks) + " exceeds " +
                         std::to_string(m) + " features");

  const auto features = build_feature_graphs(distances, options.knn_k, options.pie, options.seed);
  const auto target = label_graph(labels);

  std::size_t landmarks = 0;
  if (options.nystrom_landmarks)
    landmarks = *options.nystrom_landmarks;
  else if (m > kNystromAutoThreshold)
    landmarks = kNystromAutoThreshold;
  RedundancyMatrix penalty = landmarks > 0 && landmarks < m
                                 ? nystrom_redundancy(features.embeddings, labels, num_classes, options.penalty, landmarks, options.seed)
                                 : build_redundancy(features.embeddings, labels, num_classes, options.penalty);
  penalty = psd_shift(std::move(penalty));

  const auto design = flatten(features.graphs, target);
  SolveOptions solve_options{options.lambda.value_or(0.0), options.beta, options.max_sweeps, options.tol};

  SelectionResult out;
  SolveResult solved;
  if (options.target_size) {
    auto t = solve_for_target_size(design, penalty.values, *options.target_size, solve_options, kSupportEpsilon);
    if (t.achieved_size != *options.target_size)
      warn("target size " + std::to_string(*options.target_size) + " not reached; closest support has " +
           std::to_string(t.achieved_size) + " features");
    solved = std::move(t.solve);
    out.lambda = t.lambda;
  } else {
    solved = solve(design, penalty.values, solve_options);
    out.lambda = *options.lambda;
  }
  if (!solved.converged) warn("coordinate descent stopped at max sweeps without converging");

  out.alpha = solved.alpha;
  out.selected = support(out.alpha);
  if (out.selected.empty()) warn("no feature selected (lambda too large?)");
  out.penalty = options.penalty;
  out.beta = options.beta;
  out.gamma = penalty.gamma;
  out.sweeps_used = solved.sweeps_used;
  out.converged = solved.converged;
  out.final_objective = solved.final_objective();
  out.nystrom_landmarks = penalty.landmarks;
  out.penalty_matrix = std::move(penalty);
  return out;
}

SelectionResult pie_ss(const Dataset& dataset, const SelectOptions& options, const DistanceOptions& distance_options,
                       const DistanceCache* cache) {
  const auto full = all_distance_matrices(dataset, distance_options, cache);
  const auto train = restrict_all(full, dataset.train_ids);
  const auto labels = dataset.label_indices(dataset.train_ids);
  return pie_ss(train, labels, static_cast<int>(dataset.num_classes()), options);
}

} // namespace mtssel
