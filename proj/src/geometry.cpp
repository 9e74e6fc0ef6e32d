#include "slrr/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace slrr {

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0 || !coords_.allFinite()) {
    throw std::invalid_argument("SpherePoint: coordinates must be finite and nonempty");
  }
  if (std::abs(coords_.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("SpherePoint: coordinates must have unit norm");
  }
}

SpherePoint SpherePoint::project(Eigen::VectorXd v) {
  const double n = v.norm();
  if (!(n > 0.0) || !v.allFinite()) {
    throw std::invalid_argument("SpherePoint::project: vector must be finite and nonzero");
  }
  v /= n;
  return SpherePoint(std::move(v));
}

TangentVector::TangentVector(SpherePoint base, Eigen::VectorXd vec)
    : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.dim()) {
    throw DimensionError("TangentVector: vector and base dimensions differ");
  }
  if (!vec_.allFinite()) {
    throw std::invalid_argument("TangentVector: entries must be finite");
  }
  const double dot = std::abs(vec_.dot(base_.coords()));
  if (dot > kTangentOrthoTol * vec_.norm()) {
    throw std::invalid_argument("TangentVector: vector is not orthogonal to its base");
  }
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  const double d = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  return std::acos(d);
}

TangentVector log_map(const SpherePoint& x, const SpherePoint& y) {
  const double d = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  if (d <= -1.0 + kAntipodalEps) {
    throw AntipodalError("log_map: points are antipodal, log map undefined");
  }
  Eigen::VectorXd u = y.coords() - d * x.coords();
  const double un = u.norm();
  if (un < kZeroVectorTol) {
    return TangentVector(x, Eigen::VectorXd::Zero(x.dim()));
  }
  u *= std::acos(d) / un;
  return TangentVector(x, std::move(u));
}

SpherePoint exp_map(const TangentVector& v) {
  const double t = v.norm();
  if (t < kZeroVectorTol) {
    return v.base();
  }
  Eigen::VectorXd out =
      std::cos(t) * v.base().coords() + (std::sin(t) / t) * v.vec();
  return SpherePoint::project(std::move(out));
}

double tangent_inner(const TangentVector& a, const TangentVector& b) {
  if ((a.base().coords() - b.base().coords()).norm() > 1e-10) {
    throw BaseMismatchError("tangent_inner: tangent vectors have different base points");
  }
  return a.vec().dot(b.vec());
}

}  // namespace slrr
