#include "slrr/clustering.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "slrr/gram.hpp"
#include "slrr/parallel.hpp"

namespace slrr {

namespace {

constexpr double kSymTol = 1e-12;
constexpr int kKmeansMaxIters = 100;

Affinity kernel_from_distances(Eigen::MatrixXd dist, double sigma_a) {
  if (!(sigma_a > 0.0)) {
    throw std::invalid_argument("affinity: sigma_a must be positive");
  }
  const double inv = 1.0 / (sigma_a * sigma_a);
  Affinity out;
  out.a = (-dist.array().square() * inv).exp();
  out.a.diagonal().setZero();
  return out;
}

struct KmeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

int nearest_center(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                   Eigen::Index row, double* dist2_out) {
  int best = 0;
  double best_d = (x.row(row) - centers.row(0)).squaredNorm();
  for (int c = 1; c < centers.rows(); ++c) {
    const double d = (x.row(row) - centers.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist2_out != nullptr) *dist2_out = best_d;
  return best;
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& x, int k,
                              std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick_first(0, n - 1);
  centers.row(0) = x.row(pick_first(rng));
  Eigen::VectorXd dist2(n);
  for (int c = 1; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = (x.row(i) - centers.row(0)).squaredNorm();
      for (int j = 1; j < c; ++j) {
        d = std::min(d, (x.row(i) - centers.row(j)).squaredNorm());
      }
      dist2(i) = d;
    }
    const double total = dist2.sum();
    Eigen::Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double r = u(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (r <= acc) {
          chosen = i;
          break;
        }
      }
    } else {
      // all points coincide with an existing center
      chosen = pick_first(rng);
    }
    centers.row(c) = x.row(chosen);
  }
  return centers;
}

KmeansRun kmeans_once(const Eigen::MatrixXd& x, int k, std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd centers = kmeanspp_init(x, k, rng);

  KmeansRun run;
  run.labels.assign(n, 0);
  std::vector<int> counts(k, 0);
  for (int it = 0; it < kKmeansMaxIters; ++it) {
    bool changed = (it == 0);
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest_center(x, centers, i, nullptr);
      if (c != run.labels[i]) {
        run.labels[i] = c;
        changed = true;
      }
      counts[c] += 1;
    }
    // Repopulate empty clusters with the point farthest from its center
    // (lowest index on ties) so every cluster id stays in use.
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[run.labels[i]] <= 1) continue;
        const double d =
            (x.row(i) - centers.row(run.labels[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      counts[run.labels[far]] -= 1;
      run.labels[far] = c;
      counts[c] = 1;
      centers.row(c) = x.row(far);
      changed = true;
    }
    if (!changed) break;
    centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      centers.row(run.labels[i]) += x.row(i);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);
    }
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia += (x.row(i) - centers.row(run.labels[i])).squaredNorm();
  }
  return run;
}

}  // namespace

void Affinity::validate() const {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) {
    throw std::invalid_argument("Affinity: matrix must be square");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("Affinity: entries must be finite");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymTol) {
    throw std::invalid_argument("Affinity: matrix must be symmetric");
  }
  if (a.minCoeff() < 0.0) {
    throw std::invalid_argument("Affinity: entries must be nonnegative");
  }
  if (a.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("Affinity: diagonal must be zero");
  }
}

Affinity affinity_from_w(const Eigen::MatrixXd& w) {
  if (!w.allFinite()) {
    throw std::invalid_argument("affinity_from_w: W must be finite");
  }
  if (w.rows() != w.cols()) {
    throw std::invalid_argument("affinity_from_w: W must be square");
  }
  Affinity out;
  out.a = 0.5 * (w.cwiseAbs() + w.cwiseAbs().transpose());
  out.a.diagonal().setZero();
  return out;
}

Affinity affinity_wtw(const Eigen::MatrixXd& w) {
  if (!w.allFinite()) {
    throw std::invalid_argument("affinity_wtw: W must be finite");
  }
  if (w.rows() != w.cols()) {
    throw std::invalid_argument("affinity_wtw: W must be square");
  }
  Eigen::MatrixXd g = (w.transpose() * w).cwiseAbs();
  Affinity out;
  out.a = 0.5 * (g + g.transpose());
  out.a.diagonal().setZero();
  return out;
}

Affinity geodesic_affinity(const SphereData& data, double sigma_a) {
  return kernel_from_distances(pairwise_geodesic(data), sigma_a);
}

Affinity gaussian_affinity(const Eigen::MatrixXd& rows, double sigma_a) {
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = (rows.row(i) - rows.row(j)).norm();
    }
  }
  return kernel_from_distances(std::move(dist), sigma_a);
}

double median_offdiagonal(const Eigen::MatrixXd& dist) {
  const Eigen::Index n = dist.rows();
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      vals.push_back(dist(i, j));
    }
  }
  if (vals.empty()) return 1.0;
  const auto mid = vals.begin() + vals.size() / 2;
  std::nth_element(vals.begin(), mid, vals.end());
  return *mid > 0.0 ? *mid : 1.0;
}

std::pair<std::vector<int>, double> kmeans(const Eigen::MatrixXd& x, int k,
                                           std::uint64_t seed, int restarts) {
  if (k < 1 || k > x.rows()) {
    throw std::invalid_argument("kmeans: need 1 <= k <= n");
  }
  if (restarts < 1) {
    throw std::invalid_argument("kmeans: restarts must be positive");
  }
  std::vector<KmeansRun> runs(restarts);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (int r = 0; r < restarts; ++r) {
    runs[r] = kmeans_once(x, k, mix_seed(seed, static_cast<std::uint64_t>(r)));
  }
  // strict < keeps the lowest restart index on ties
  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return {std::move(runs[best].labels), runs[best].inertia};
}

ClusterResult ncut(const Affinity& a, int k, std::uint64_t seed) {
  a.validate();
  const Eigen::Index n = a.a.rows();
  if (k < 1) {
    throw std::invalid_argument("ncut: k must be positive");
  }
  if (k > n) {
    throw std::invalid_argument("ncut: k exceeds number of points");
  }

  ClusterResult result;
  result.k = k;
  if (k == 1) {
    result.labels.assign(n, 0);
    return result;
  }
  if (a.a.maxCoeff() <= 0.0) {
    throw DegenerateAffinityError("ncut: affinity is identically zero");
  }

  Eigen::VectorXd d = a.a.rowwise().sum();
  Eigen::VectorXd dinv =
      d.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; });
  Eigen::MatrixXd lap =
      -(dinv.asDiagonal() * a.a * dinv.asDiagonal());
  lap.diagonal().array() += 1.0;
  lap = 0.5 * (lap + lap.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) {
    throw SvdFailure("ncut: eigendecomposition failed");
  }
  Eigen::MatrixXd embed = eig.eigenvectors().leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 0.0) embed.row(i) /= norm;
  }

  result.labels = kmeans(embed, k, seed).first;
  return result;
}

std::pair<double, std::vector<int>> assignment_max_sum(
    const Eigen::MatrixXd& score) {
  const int n = static_cast<int>(score.rows());
  if (score.cols() != n || n == 0) {
    throw std::invalid_argument("assignment_max_sum: matrix must be square");
  }
  // Hungarian algorithm with potentials on the negated (minimization)
  // problem; 1-indexed with a virtual row/column 0.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -score(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    row_to_col[match[j] - 1] = j - 1;
    total += score(match[j] - 1, j - 1);
  }
  return {total, row_to_col};
}

double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatchError("clustering_accuracy: label lengths differ");
  }
  if (pred.empty()) {
    throw std::invalid_argument("clustering_accuracy: empty labels");
  }
  int kmax = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) {
      throw std::invalid_argument("clustering_accuracy: labels must be >= 0");
    }
    kmax = std::max({kmax, pred[i] + 1, truth[i] + 1});
  }
  if (kmax > 20) {
    throw std::invalid_argument("clustering_accuracy: more than 20 cluster ids");
  }
  Eigen::MatrixXd contingency = Eigen::MatrixXd::Zero(kmax, kmax);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    contingency(pred[i], truth[i]) += 1.0;
  }
  const double best = assignment_max_sum(contingency).first;
  return best / static_cast<double>(pred.size());
}

}  // namespace slrr
