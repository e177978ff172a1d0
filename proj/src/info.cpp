#include "mtssel/info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "mtssel/errors.hpp"
#include "mtssel/rng.hpp"

namespace mtssel {

Discretization from_labels(std::span<const int> labels) {
  Discretization d{std::vector<int>(labels.begin(), labels.end()), 0};
  for (int y : labels) {
    if (y < 0) throw ParameterError("labels must be non-negative class ids");
    d.num_bins = std::max(d.num_bins, y + 1);
  }
  return d;
}

Discretization quantize(std::span<const double> values, int bins, std::uint64_t /*seed*/) {
  const std::size_t n = values.size();
  if (bins < 2) throw ParameterError("quantize: need at least 2 bins");
  if (n < static_cast<std::size_t>(bins))
    throw ParameterError("quantize: n=" + std::to_string(n) + " is smaller than the number of bins " + std::to_string(bins));
  for (double x : values)
    if (!std::isfinite(x)) throw InputError("quantize: non-finite embedding value");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto C = static_cast<std::size_t>(bins);
  std::vector<double> centers(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double p = (2.0 * static_cast<double>(c) + 1.0) / (2.0 * static_cast<double>(C));
    const double pos = std::clamp(static_cast<double>(n) * p - 0.5, 0.0, static_cast<double>(n - 1));
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    centers[c] = lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
  }

  auto assign = [&](std::vector<int>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::abs(values[i] - centers[0]);
      for (std::size_t c = 1; c < C; ++c) {
        const double d = std::abs(values[i] - centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out[i] = static_cast<int>(best);
    }
  };

  std::vector<int> assignment(n), next(n);
  assign(assignment);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> sum(C, 0.0);
    std::vector<std::size_t> count(C, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[static_cast<std::size_t>(assignment[i])] += values[i];
      ++count[static_cast<std::size_t>(assignment[i])];
    }
    for (std::size_t c = 0; c < C; ++c)
      if (count[c]) centers[c] = sum[c] / static_cast<double>(count[c]);
    assign(next);
    if (next == assignment) break;
    assignment.swap(next);
  }

  std::vector<std::size_t> order(C);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return centers[a] < centers[b]; });
  std::vector<int> rank(C);
  for (std::size_t r = 0; r < C; ++r) rank[order[r]] = static_cast<int>(r);

  Discretization d{std::vector<int>(n), bins};
  for (std::size_t i = 0; i < n; ++i) d.bins[i] = rank[static_cast<std::size_t>(assignment[i])];
  return d;
}

namespace {

std::size_t width(const Discretization& a) {
  int w = a.num_bins;
  for (int b : a.bins) {
    if (b < 0) throw ParameterError("discretization ids must be non-negative");
    w = std::max(w, b + 1);
  }
  return static_cast<std::size_t>(w);
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw ParameterError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

} // namespace

double entropy(const Discretization& a) {
  if (a.bins.empty()) throw ParameterError("entropy: empty discretization");
  std::vector<std::size_t> counts(width(a), 0);
  for (int b : a.bins) ++counts[static_cast<std::size_t>(b)];
  const double n = static_cast<double>(a.bins.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const Discretization& a, const Discretization& b) {
  check_lengths(a.size(), b.size());
  if (a.bins.empty()) throw ParameterError("mutual_information: empty input");
  const std::size_t wa = width(a), wb = width(b);
  std::vector<std::size_t> joint(wa * wb, 0), ca(wa, 0), cb(wb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = static_cast<std::size_t>(a.bins[i]);
    const auto y = static_cast<std::size_t>(b.bins[i]);
    ++joint[x * wb + y];
    ++ca[x];
    ++cb[y];
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (std::size_t x = 0; x < wa; ++x) {
    for (std::size_t y = 0; y < wb; ++y) {
      const auto c = joint[x * wb + y];
      if (c == 0) continue;
      const double cxy = static_cast<double>(c);
      mi += cxy / n * std::log(cxy * n / (static_cast<double>(ca[x]) * static_cast<double>(cb[y])));
    }
  }
  return mi;
}

double conditional_mi(const Discretization& a, const Discretization& b, const Discretization& given) {
  check_lengths(a.size(), b.size());
  check_lengths(a.size(), given.size());
  if (a.bins.empty()) throw ParameterError("conditional_mi: empty input");
  const std::size_t wa = width(a), wb = width(b), wz = width(given);
  std::vector<std::size_t> abz(wa * wb * wz, 0), az(wa * wz, 0), bz(wb * wz, 0), cz(wz, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto x = static_cast<std::size_t>(a.bins[i]);
    const auto y = static_cast<std::size_t>(b.bins[i]);
    const auto z = static_cast<std::size_t>(given.bins[i]);
    ++abz[(z * wa + x) * wb + y];
    ++az[z * wa + x];
    ++bz[z * wb + y];
    ++cz[z];
  }
  const double n = static_cast<double>(a.size());
  double cmi = 0.0;
  for (std::size_t z = 0; z < wz; ++z) {
    if (cz[z] == 0) continue;
    for (std::size_t x = 0; x < wa; ++x) {
      for (std::size_t y = 0; y < wb; ++y) {
        const auto c = abz[(z * wa + x) * wb + y];
        if (c == 0) continue;
        const double cxyz = static_cast<double>(c);
        cmi += cxyz / n *
               std::log(cxyz * static_cast<double>(cz[z]) /
                        (static_cast<double>(az[z * wa + x]) * static_cast<double>(bz[z * wb + y])));
      }
    }
  }
  return cmi;
}

double nmi(const Discretization& bins, const Discretization& labels) {
  check_lengths(bins.size(), labels.size());
  const double hy = entropy(labels);
  if (!(hy > 0.0)) throw ParameterError("nmi: labels are constant");
  const double hb = entropy(bins);
  if (hb == 0.0) return 0.0;
  return mutual_information(bins, labels) / std::sqrt(hb * hy);
}

double nmi(std::span<const double> embedding, std::span<const int> labels, int num_classes) {
  check_lengths(embedding.size(), labels.size());
  return nmi(quantize(embedding, num_classes), from_labels(labels));
}

std::string_view to_string(PenaltyKind kind) { return kind == PenaltyKind::MI ? "mi" : "cmi"; }

PenaltyKind parse_penalty_kind(std::string_view text) {
  if (text == "mi") return PenaltyKind::MI;
  if (text == "cmi") return PenaltyKind::CMI;
  throw ParameterError("unknown penalty kind '" + std::string(text) + "' (expected mi or cmi)");
}

namespace {

double redundancy_cell(std::span<const Discretization> bins, const Discretization& y, PenaltyKind kind, std::size_t i,
                       std::size_t j) {
  if (kind == PenaltyKind::MI) return mutual_information(bins[i], bins[j]);
  if (i == j) return mutual_information(bins[i], y);
  return 0.5 * (conditional_mi(bins[i], y, bins[j]) + conditional_mi(bins[j], y, bins[i]));
}

std::vector<Discretization> quantize_all(std::span<const Embedding> embeddings, std::span<const int> labels,
                                         int num_classes) {
  if (embeddings.empty()) throw ParameterError("redundancy: no embeddings");
  std::vector<Discretization> bins;
  bins.reserve(embeddings.size());
  for (const auto& e : embeddings) {
    check_lengths(e.values.size(), labels.size());
    bins.push_back(quantize(e.values, num_classes));
  }
  return bins;
}

} // namespace

RedundancyMatrix redundancy_from_bins(std::span<const Discretization> bins, const Discretization& labels,
                                      PenaltyKind kind) {
  const std::size_t m = bins.size();
  RedundancyMatrix r{kind, Matrix(m, m), 0.0, {}};
  const auto rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < m; ++j) {
      const double v = redundancy_cell(bins, labels, kind, i, j);
      r.values(i, j) = v;
      r.values(j, i) = v;
    }
  }
  return r;
}

RedundancyMatrix build_redundancy(std::span<const Embedding> embeddings, std::span<const int> labels, int num_classes,
                                  PenaltyKind kind) {
  const auto bins = quantize_all(embeddings, labels, num_classes);
  return redundancy_from_bins(bins, from_labels(labels), kind);
}

RedundancyMatrix build_redundancy_serial(std::span<const Embedding> embeddings, std::span<const int> labels,
                                         int num_classes, PenaltyKind kind) {
  const auto bins = quantize_all(embeddings, labels, num_classes);
  const auto y = from_labels(labels);
  const std::size_t m = bins.size();
  RedundancyMatrix r{kind, Matrix(m, m), 0.0, {}};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double v = redundancy_cell(bins, y, kind, i, j);
      r.values(i, j) = v;
      r.values(j, i) = v;
    }
  }
  return r;
}

namespace {

using EMatrix = Eigen::MatrixXd;

EMatrix truncated_pinv(const EMatrix& a) {
  const auto s = static_cast<double>(a.rows());
  const double threshold = 1e-8 * std::abs(a.trace()) / s;
  Eigen::SelfAdjointEigenSolver<EMatrix> eig(a);
  const auto& lambda = eig.eigenvalues();
  const auto& vecs = eig.eigenvectors();
  EMatrix pinv = EMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    if (std::abs(lambda(k)) > threshold) pinv += vecs.col(k) * vecs.col(k).transpose() / lambda(k);
  return pinv;
}

// Fills the full matrix given a cell accessor that is only called on pairs
// touching a landmark.
template <class Cell>
Matrix complete(std::size_t m, std::span<const std::size_t> landmarks, Cell&& cell) {
  std::vector<bool> is_landmark(m, false);
  for (auto l : landmarks) {
    if (l >= m) throw ParameterError("nystrom: landmark id out of range");
    if (is_landmark[l]) throw ParameterError("nystrom: duplicate landmark");
    is_landmark[l] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < m; ++i)
    if (!is_landmark[i]) rest.push_back(i);

  const auto s = static_cast<Eigen::Index>(landmarks.size());
  const auto t = static_cast<Eigen::Index>(rest.size());
  Matrix out(m, m);
  EMatrix a(s, s), b(s, t);
  for (Eigen::Index p = 0; p < s; ++p) {
    for (Eigen::Index q = p; q < s; ++q) {
      const double v = cell(landmarks[static_cast<std::size_t>(p)], landmarks[static_cast<std::size_t>(q)]);
      a(p, q) = a(q, p) = v;
    }
    for (Eigen::Index q = 0; q < t; ++q) b(p, q) = cell(landmarks[static_cast<std::size_t>(p)], rest[static_cast<std::size_t>(q)]);
  }
  for (Eigen::Index p = 0; p < s; ++p) {
    const auto lp = landmarks[static_cast<std::size_t>(p)];
    for (Eigen::Index q = 0; q < s; ++q) out(lp, landmarks[static_cast<std::size_t>(q)]) = a(p, q);
    for (Eigen::Index q = 0; q < t; ++q) {
      out(lp, rest[static_cast<std::size_t>(q)]) = b(p, q);
      out(rest[static_cast<std::size_t>(q)], lp) = b(p, q);
    }
  }
  if (t > 0) {
    const EMatrix c = b.transpose() * truncated_pinv(a) * b;
    for (Eigen::Index p = 0; p < t; ++p)
      for (Eigen::Index q = 0; q < t; ++q)
        out(rest[static_cast<std::size_t>(p)], rest[static_cast<std::size_t>(q)]) = 0.5 * (c(p, q) + c(q, p));
  }
  return out;
}

} // namespace

Matrix nystrom_complete(const Matrix& exact, std::span<const std::size_t> landmarks) {
  if (!exact.is_square()) throw ParameterError("nystrom: matrix must be square");
  if (landmarks.empty()) throw ParameterError("nystrom: need at least one landmark");
  return complete(exact.rows(), landmarks, [&](std::size_t i, std::size_t j) { return exact(i, j); });
}

RedundancyMatrix nystrom_redundancy(std::span<const Embedding> embeddings, std::span<const int> labels,
                                    int num_classes, PenaltyKind kind, std::size_t landmarks, std::uint64_t seed) {
  const std::size_t m = embeddings.size();
  if (landmarks < 1 || landmarks > m)
    throw ParameterError("nystrom: landmark count " + std::to_string(landmarks) + " must lie in [1, " + std::to_string(m) + "]");
  const auto bins = quantize_all(embeddings, labels, num_classes);
  const auto y = from_labels(labels);

  std::vector<std::size_t> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  CounterRng rng(derive_seed(seed, Stream::Nystrom));
  rng.shuffle(ids);
  ids.resize(landmarks);
  std::sort(ids.begin(), ids.end());

  RedundancyMatrix r{kind, {}, 0.0, ids};
  r.values = complete(m, ids, [&](std::size_t i, std::size_t j) { return redundancy_cell(bins, y, kind, i, j); });
  return r;
}

double min_eigenvalue(const Matrix& symmetric, EigenMethod method) {
  const std::size_t m = symmetric.rows();
  if (!symmetric.is_square() || m == 0) throw ParameterError("min_eigenvalue: need a non-empty square matrix");
  if (method == EigenMethod::Auto) method = m <= 2000 ? EigenMethod::Dense : EigenMethod::Power;

  if (method == EigenMethod::Dense) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        symmetric.data().data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::SelfAdjointEigenSolver<EMatrix> eig(EMatrix(a), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
  }

  // Largest eigenvalue of B = c I - R (PSD since c bounds the spectrum), via
  // power iteration with a Rayleigh quotient estimate.
  double c = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (double x : symmetric.row(i)) row += std::abs(x);
    c = std::max(c, row);
  }
  CounterRng rng(0x5eed);
  std::vector<double> v(m), w(m);
  for (auto& x : v) x = rng.uniform() + 0.5;
  double mu = 0.0;
  for (int it = 0; it < 100000; ++it) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      const auto row = symmetric.row(i);
      for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      w[i] = c * v[i] - s;
    }
    double rq = 0.0;
    for (std::size_t i = 0; i < m; ++i) rq += v[i] * w[i];
    const bool done = it > 0 && std::abs(rq - mu) <= 1e-15 * std::max(1.0, std::abs(rq));
    mu = rq;
    v.swap(w);
    if (done) break;
  }
  return c - mu;
}

RedundancyMatrix psd_shift(RedundancyMatrix r, EigenMethod method) {
  for (double x : r.values.data())
    if (!std::isfinite(x)) throw InputError("psd_shift: non-finite entry");
  if (!is_symmetric(r.values)) throw ParameterError("psd_shift: matrix is not symmetric");
  const double lambda_min = min_eigenvalue(r.values, method);
  const double gamma = std::max(0.0, -lambda_min) + 1e-9;
  for (std::size_t i = 0; i < r.values.rows(); ++i) r.values(i, i) += gamma;
  r.gamma += gamma;
  return r;
}

} // namespace mtssel
