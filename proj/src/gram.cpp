#include "slrr/gram.hpp"

#include <cmath>
#include <stdexcept>

#include "slrr/parallel.hpp"

namespace slrr {

namespace {

Eigen::MatrixXd factor_for_point(const SphereData& data, Eigen::Index i) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index dim = data[0].dim();
  Eigen::MatrixXd v(dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    v.col(j) = log_map(data[i], data[j]).vec();
  }
  return v;
}

void check_data(const SphereData& data) {
  if (data.size() < 2) {
    throw std::invalid_argument("need at least two sphere points");
  }
  const Eigen::Index dim = data[0].dim();
  for (const auto& p : data) {
    if (p.dim() != dim) {
      throw DimensionError("sphere points have inconsistent dimensions");
    }
  }
}

// Raised before entering the parallel factor loop; an exception escaping an
// OpenMP region would terminate instead of propagating.
void check_no_antipodal(const SphereData& data) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (data[i].coords().dot(data[j].coords()) <= -1.0 + kAntipodalEps) {
        throw AntipodalError("antipodal pair in dataset");
      }
    }
  }
}

}  // namespace

TangentFactors build_tangent_factors(const SphereData& data) {
  check_data(data);
  check_no_antipodal(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  TangentFactors factors(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    factors[i] = factor_for_point(data, i);
  }
  return factors;
}

GramSet build_gram(const TangentFactors& factors) {
  const Eigen::Index n = static_cast<Eigen::Index>(factors.size());
  GramSet grams;
  grams.mats.resize(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    grams.mats[i].noalias() = factors[i].transpose() * factors[i];
  }
  return grams;
}

Eigen::MatrixXd pairwise_geodesic(const SphereData& data) {
  check_data(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd d(n, n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      d(i, j) = i == j ? 0.0 : geodesic_distance(data[i], data[j]);
    }
  }
  return d;
}

GeodesicWeightMatrix build_geodesic_weights(const SphereData& data, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("geodesic weight scale sigma must be positive");
  }
  const Eigen::MatrixXd d = pairwise_geodesic(data);
  GeodesicWeightMatrix gw;
  gw.sigma = sigma;
  gw.weights = (d / sigma).array().exp();
  gw.weights.diagonal().setZero();
  return gw;
}

TangentFactors build_euclidean_factors(const SphereData& data) {
  check_data(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index dim = data[0].dim();
  TangentFactors factors(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::MatrixXd v(dim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      v.col(j) = data[j].coords() - data[i].coords();
    }
    factors[i] = std::move(v);
  }
  return factors;
}

GeodesicWeightMatrix unit_weights(Eigen::Index n) {
  GeodesicWeightMatrix gw;
  gw.sigma = 1.0;
  gw.weights = Eigen::MatrixXd::Ones(n, n);
  gw.weights.diagonal().setZero();
  return gw;
}

namespace serial {

TangentFactors build_tangent_factors(const SphereData& data) {
  check_data(data);
  check_no_antipodal(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  TangentFactors factors(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    factors[i] = factor_for_point(data, i);
  }
  return factors;
}

GramSet build_gram(const TangentFactors& factors) {
  const Eigen::Index n = static_cast<Eigen::Index>(factors.size());
  GramSet grams;
  grams.mats.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    grams.mats[i].noalias() = factors[i].transpose() * factors[i];
  }
  return grams;
}

Eigen::MatrixXd pairwise_geodesic(const SphereData& data) {
  check_data(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      d(i, j) = i == j ? 0.0 : geodesic_distance(data[i], data[j]);
    }
  }
  return d;
}

}  // namespace serial

}  // namespace slrr
