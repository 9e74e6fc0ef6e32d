#include "slrr/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "slrr/parallel.hpp"

namespace slrr {

namespace {

constexpr int kMaxRejectionAttempts = 100000;

Eigen::VectorXd gaussian_vector(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = gauss(rng);
  return v;
}

SphereData draw_centroids(const SynthSpec& spec, std::mt19937_64& rng) {
  SphereData centroids;
  centroids.reserve(spec.k);
  int attempts = 0;
  while (static_cast<int>(centroids.size()) < spec.k) {
    if (attempts >= kMaxRejectionAttempts) {
      throw SeparationUnsatisfiable(
          "generate: could not place centroids min_sep apart");
    }
    ++attempts;
    Eigen::VectorXd c = gaussian_vector(spec.m + 1, rng).cwiseAbs();
    if (c.norm() == 0.0) continue;
    SpherePoint candidate = SpherePoint::project(std::move(c));
    bool ok = true;
    for (const SpherePoint& other : centroids) {
      if (geodesic_distance(candidate, other) < spec.min_sep) {
        ok = false;
        break;
      }
    }
    if (ok) centroids.push_back(std::move(candidate));
  }
  return centroids;
}

}  // namespace

void SynthSpec::validate() const {
  if (k < 1) throw std::invalid_argument("SynthSpec: k must be positive");
  if (n_per < 1) throw std::invalid_argument("SynthSpec: n_per must be positive");
  if (k * n_per < 2) {
    throw std::invalid_argument("SynthSpec: need at least two points total");
  }
  if (m < 1) throw std::invalid_argument("SynthSpec: m must be positive");
  if (!(spread >= 0.0)) {
    throw std::invalid_argument("SynthSpec: spread must be nonnegative");
  }
  if (!(min_sep > 0.0)) {
    throw std::invalid_argument("SynthSpec: min_sep must be positive");
  }
}

LabeledSphereSet generate(const SynthSpec& spec) {
  spec.validate();
  if (spec.k > 1 && spec.spread >= spec.min_sep / 2.0) {
    std::fprintf(stderr,
                 "warning: spread %.3g >= min_sep/2 = %.3g; clusters may "
                 "overlap\n",
                 spec.spread, spec.min_sep / 2.0);
  }

  std::mt19937_64 centroid_rng(mix_seed(spec.seed, 0));
  const SphereData centroids = draw_centroids(spec, centroid_rng);

  // Tangent per-axis std so the total angular std equals spread exactly.
  const double axis_std = spec.spread / std::sqrt(static_cast<double>(spec.m));

  LabeledSphereSet out;
  out.points.reserve(static_cast<std::size_t>(spec.k) * spec.n_per);
  out.labels.reserve(out.points.capacity());
  for (int c = 0; c < spec.k; ++c) {
    const SpherePoint& center = centroids[c];
    for (int j = 0; j < spec.n_per; ++j) {
      const std::uint64_t stream =
          1 + static_cast<std::uint64_t>(c) * spec.n_per + j;
      if (spec.spread == 0.0) {
        out.points.push_back(center);
      } else {
        std::mt19937_64 rng(mix_seed(spec.seed, stream));
        Eigen::VectorXd v = axis_std * gaussian_vector(spec.m + 1, rng);
        v -= v.dot(center.coords()) * center.coords();
        out.points.push_back(exp_map(TangentVector(center, std::move(v))));
      }
      out.labels.push_back(c);
    }
  }
  return out;
}

}  // namespace slrr
