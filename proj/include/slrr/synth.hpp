#pragma once

#include <cstdint>

#include "slrr/classify.hpp"
#include "slrr/errors.hpp"

namespace slrr {

/// Parameters for planted-cluster sphere data. spread is the total angular
/// standard deviation of a cluster in radians (split evenly across the m
/// tangent axes); min_sep the minimum pairwise centroid geodesic distance.
struct SynthSpec {
  int k = 3;
  int n_per = 30;
  int m = 9;
  double spread = 0.05;
  double min_sep = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws k centroids by rejection sampling unit vectors in the nonnegative
/// orthant of S^m until all pairwise geodesic distances reach min_sep, then
/// scatters n_per points per cluster as exp_centroid of a tangent Gaussian.
/// Deterministic for fixed parameters; labels are cluster indices. Warns on
/// stderr when spread >= min_sep / 2.
/// Throws SeparationUnsatisfiable after 1e5 rejection attempts.
LabeledSphereSet generate(const SynthSpec& spec);

}  // namespace slrr
