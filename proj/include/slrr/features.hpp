#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slrr/errors.hpp"
#include "slrr/geometry.hpp"

namespace slrr {

/// Raw input sample before feature extraction: a flat vector of finite
/// values plus bookkeeping.
struct RawSample {
  Eigen::VectorXd values;
  std::string id;
  std::optional<int> class_label;

  void validate() const;
};

/// Equal-width histogram. counts holds nonnegative bin mass (length B),
/// bin_edges the B+1 strictly ascending edges. For multi-dimensional
/// histograms counts is the row-major flattening of a B^d grid and
/// bin_edges degenerates to the flat bin ordinals 0..B^d.
struct Histogram {
  Eigen::VectorXd counts;
  Eigen::VectorXd bin_edges;

  void validate() const;
};

/// Bins sample.values into B equal-width bins. With no explicit range the
/// sample min/max is used and the right edge is expanded by 1e-12 so the
/// maximum lands in the last bin. Bins are right-closed: a value exactly on
/// an interior edge belongs to the bin to its left, values at or below the
/// left edge to bin 0. Values outside an explicit range are clamped into
/// the end bins so every value is counted exactly once.
/// Throws EmptyRangeError when lo == hi and B > 1.
Histogram histogram(const RawSample& sample, int bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

/// d-dimensional histogram on a bins^d grid. sample.values is read as
/// consecutive d-tuples (its length must be a multiple of d). Bin indices
/// are flattened row-major (axis 0 slowest). Per-axis ranges default to the
/// per-axis min/max with the same right-edge expansion as histogram().
Histogram histogram_md(const RawSample& sample, int bins, int dims,
                       std::optional<std::vector<std::pair<double, double>>>
                           ranges = std::nullopt);

/// Normalizes counts to a probability vector p and returns the square-root
/// density sqrt(p) as a point on the unit sphere. All coordinates are
/// nonnegative, so downstream pairs are never antipodal.
SpherePoint to_sqrt_density(const Histogram& h);

/// Returns sample with zero-mean Gaussian noise added to every value. The
/// per-element noise variance is mean(values^2) / snr, i.e. snr is the
/// linear signal-to-noise power ratio. Deterministic given seed.
RawSample add_noise_snr(const RawSample& sample, double snr, std::uint64_t seed);

}  // namespace slrr
