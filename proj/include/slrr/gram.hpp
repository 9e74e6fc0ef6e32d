#pragma once

#include <Eigen/Core>

#include <vector>

#include "slrr/geometry.hpp"

namespace slrr {

/// The n quadratic-form matrices Q_i, each n x n and semi-positive definite
/// by construction (Q_i = V_i^T V_i).
struct GramSet {
  std::vector<Eigen::MatrixXd> mats;

  Eigen::Index size() const { return static_cast<Eigen::Index>(mats.size()); }
};

/// Per-point factor matrices V_i; column j of V_i is log_{x_i}(x_j) in
/// ambient coordinates, so V_i is (m+1) x n with a zero i-th column.
using TangentFactors = std::vector<Eigen::MatrixXd>;

/// Off-diagonal weights exp(d_g(x_i, x_j) / sigma) for the weighted l1 term;
/// diagonal entries are exactly zero.
struct GeodesicWeightMatrix {
  Eigen::MatrixXd weights;
  double sigma = 1.0;
};

// Parallel builders (OpenMP over i; each output block depends only on the
// immutable input, so results are identical for any thread count).
TangentFactors build_tangent_factors(const SphereData& data);
GramSet build_gram(const TangentFactors& factors);
Eigen::MatrixXd pairwise_geodesic(const SphereData& data);
GeodesicWeightMatrix build_geodesic_weights(const SphereData& data, double sigma);

/// Euclidean-mode factors l_ij = x_j - x_i used by the lrr-euclid and sc
/// baselines; same shapes as build_tangent_factors.
TangentFactors build_euclidean_factors(const SphereData& data);

/// All-ones off-diagonal weight matrix (unweighted l1).
GeodesicWeightMatrix unit_weights(Eigen::Index n);

namespace serial {

// Reference implementations of the data-parallel builders, kept for testing
// and benchmarking against the OpenMP versions.
TangentFactors build_tangent_factors(const SphereData& data);
GramSet build_gram(const TangentFactors& factors);
Eigen::MatrixXd pairwise_geodesic(const SphereData& data);

}  // namespace serial

}  // namespace slrr
