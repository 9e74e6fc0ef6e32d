#pragma once

#include <Eigen/Core>

#include <vector>

#include "slrr/errors.hpp"

namespace slrr {

inline constexpr double kUnitNormTol = 1e-10;
inline constexpr double kTangentOrthoTol = 1e-9;
inline constexpr double kAntipodalEps = 1e-8;
inline constexpr double kZeroVectorTol = 1e-12;

/// A point on the unit sphere S^m, stored as its m+1 ambient coordinates.
/// Square-root densities live here: the squared entries sum to one.
class SpherePoint {
 public:
  /// Wraps coords, requiring ||coords|| = 1 within kUnitNormTol and all
  /// entries finite. Throws std::invalid_argument otherwise.
  explicit SpherePoint(Eigen::VectorXd coords);

  /// Normalizes an arbitrary nonzero vector onto the sphere.
  static SpherePoint project(Eigen::VectorXd v);

  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }  // ambient dimension m+1

 private:
  Eigen::VectorXd coords_;
};

/// A vector in the tangent space at a base point (orthogonal to the base).
class TangentVector {
 public:
  TangentVector(SpherePoint base, Eigen::VectorXd vec);

  const SpherePoint& base() const { return base_; }
  const Eigen::VectorXd& vec() const { return vec_; }
  double norm() const { return vec_.norm(); }

 private:
  SpherePoint base_;
  Eigen::VectorXd vec_;
};

using SphereData = std::vector<SpherePoint>;

/// Great-circle distance arccos(x . y), in [0, pi]. The inner product is
/// clamped to [-1, 1] before arccos to absorb rounding.
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Log map at x of y: u * arccos(x . y) / ||u|| with u = y - (x . y) x.
/// Returns the zero tangent vector when y ~ x. Throws AntipodalError when
/// x . y <= -1 + kAntipodalEps.
TangentVector log_map(const SpherePoint& x, const SpherePoint& y);

/// Exp map: cos(|v|) x + sin(|v|) v / |v|, renormalized onto the sphere.
SpherePoint exp_map(const TangentVector& v);

/// Inner product of two tangent vectors at the same base point (the metric
/// inherited from the ambient Euclidean inner product).
double tangent_inner(const TangentVector& a, const TangentVector& b);

}  // namespace slrr
