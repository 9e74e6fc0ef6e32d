#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "slrr/errors.hpp"
#include "slrr/geometry.hpp"

namespace slrr {

/// Symmetric nonnegative affinity graph with zero diagonal.
struct Affinity {
  Eigen::MatrixXd a;

  void validate() const;
};

struct ClusterResult {
  std::vector<int> labels;
  int k = 0;
  std::optional<double> accuracy;
};

/// Standard LRR affinity: A = (|W| + |W|^T) / 2 with the diagonal zeroed.
Affinity affinity_from_w(const Eigen::MatrixXd& w);

/// Alternative affinity |W^T W| (column-correlation style), diagonal zeroed.
Affinity affinity_wtw(const Eigen::MatrixXd& w);

/// Gaussian kernel affinity on geodesic distances:
/// A_ij = exp(-d_g(x_i, x_j)^2 / sigma_a^2), zero diagonal.
Affinity geodesic_affinity(const SphereData& data, double sigma_a);

/// Gaussian kernel affinity on Euclidean row distances of a coordinate
/// matrix (one point per row).
Affinity gaussian_affinity(const Eigen::MatrixXd& rows, double sigma_a);

/// Median of the off-diagonal entries of a symmetric distance matrix;
/// bandwidth heuristic for the Gaussian affinities. Falls back to 1 when
/// the median is not positive.
double median_offdiagonal(const Eigen::MatrixXd& dist);

/// Normalized-cut spectral clustering. Forms the symmetric normalized
/// Laplacian L = I - D^{-1/2} A D^{-1/2} (isolated vertices get D_ii = 1),
/// embeds into the k eigenvectors of smallest eigenvalue, row-normalizes,
/// and clusters with k-means (k-means++ init, 20 restarts, best inertia,
/// ties broken by lowest restart index). Deterministic given seed and
/// independent of thread count.
/// Throws DegenerateAffinityError when A = 0 and k > 1.
ClusterResult ncut(const Affinity& a, int k, std::uint64_t seed);

/// Lloyd k-means with k-means++ seeding over the rows of x; exposed for
/// testing. Returns (labels, inertia).
std::pair<std::vector<int>, double> kmeans(const Eigen::MatrixXd& x, int k,
                                           std::uint64_t seed, int restarts = 20);

/// Exact maximum-sum assignment on a square score matrix (Hungarian
/// algorithm with potentials). Returns the best total score and the column
/// assigned to each row.
std::pair<double, std::vector<int>> assignment_max_sum(
    const Eigen::MatrixXd& score);

/// Best fraction of agreeing labels over all bijections between predicted
/// and true cluster ids. Requires at most 20 distinct ids per side.
double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth);

}  // namespace slrr
