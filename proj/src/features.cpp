#include "slrr/features.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace slrr {

namespace {

constexpr double kRangePad = 1e-12;

// Right-closed bin index over [lo, hi] split into `bins` equal widths,
// clamped so out-of-range values land in the end bins.
Eigen::Index bin_index(double v, double lo, double width, Eigen::Index bins) {
  const Eigen::Index raw =
      static_cast<Eigen::Index>(std::ceil((v - lo) / width)) - 1;
  return std::clamp<Eigen::Index>(raw, 0, bins - 1);
}

std::pair<double, double> resolve_range(double lo, double hi, bool automatic,
                                        int bins) {
  if (lo > hi) {
    throw std::invalid_argument("histogram: range lower bound exceeds upper");
  }
  if (lo == hi && bins > 1) {
    throw EmptyRangeError("histogram: degenerate range with more than one bin");
  }
  if (automatic || lo == hi) {
    hi += kRangePad;
  }
  return {lo, hi};
}

}  // namespace

void RawSample::validate() const {
  if (values.size() == 0) {
    throw std::invalid_argument("RawSample: values must be nonempty");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("RawSample: values must be finite");
  }
}

void Histogram::validate() const {
  if (counts.size() == 0) {
    throw std::invalid_argument("Histogram: counts must be nonempty");
  }
  if ((counts.array() < 0.0).any()) {
    throw std::invalid_argument("Histogram: counts must be nonnegative");
  }
  if (!(counts.sum() > 0.0)) {
    throw std::invalid_argument("Histogram: total count must be positive");
  }
  if (bin_edges.size() != counts.size() + 1) {
    throw std::invalid_argument("Histogram: need one more edge than bins");
  }
  for (Eigen::Index j = 0; j + 1 < bin_edges.size(); ++j) {
    if (!(bin_edges(j) < bin_edges(j + 1))) {
      throw std::invalid_argument("Histogram: edges must be strictly ascending");
    }
  }
}

Histogram histogram(const RawSample& sample, int bins,
                    std::optional<std::pair<double, double>> range) {
  sample.validate();
  if (bins < 1) {
    throw std::invalid_argument("histogram: bins must be positive");
  }
  double lo, hi;
  const bool automatic = !range.has_value();
  if (automatic) {
    lo = sample.values.minCoeff();
    hi = sample.values.maxCoeff();
  } else {
    lo = range->first;
    hi = range->second;
  }
  std::tie(lo, hi) = resolve_range(lo, hi, automatic, bins);

  const double width = (hi - lo) / static_cast<double>(bins);
  Histogram h;
  h.counts = Eigen::VectorXd::Zero(bins);
  for (Eigen::Index t = 0; t < sample.values.size(); ++t) {
    h.counts(bin_index(sample.values(t), lo, width, bins)) += 1.0;
  }
  h.bin_edges.resize(bins + 1);
  for (int j = 0; j <= bins; ++j) {
    h.bin_edges(j) = lo + width * j;
  }
  h.bin_edges(bins) = hi;
  return h;
}

Histogram histogram_md(const RawSample& sample, int bins, int dims,
                       std::optional<std::vector<std::pair<double, double>>>
                           ranges) {
  sample.validate();
  if (bins < 1) {
    throw std::invalid_argument("histogram_md: bins must be positive");
  }
  if (dims < 1) {
    throw std::invalid_argument("histogram_md: dims must be positive");
  }
  if (sample.values.size() % dims != 0) {
    throw DimensionError("histogram_md: values length not a multiple of dims");
  }
  if (ranges.has_value() && static_cast<int>(ranges->size()) != dims) {
    throw DimensionError("histogram_md: need one range per axis");
  }
  const Eigen::Index count = sample.values.size() / dims;

  std::vector<double> lo(dims), width(dims);
  for (int a = 0; a < dims; ++a) {
    double axis_lo, axis_hi;
    const bool automatic = !ranges.has_value();
    if (automatic) {
      axis_lo = axis_hi = sample.values(a);
      for (Eigen::Index t = 0; t < count; ++t) {
        const double v = sample.values(t * dims + a);
        axis_lo = std::min(axis_lo, v);
        axis_hi = std::max(axis_hi, v);
      }
    } else {
      axis_lo = (*ranges)[a].first;
      axis_hi = (*ranges)[a].second;
    }
    std::tie(axis_lo, axis_hi) = resolve_range(axis_lo, axis_hi, automatic, bins);
    lo[a] = axis_lo;
    width[a] = (axis_hi - axis_lo) / static_cast<double>(bins);
  }

  Eigen::Index total = 1;
  for (int a = 0; a < dims; ++a) total *= bins;

  Histogram h;
  h.counts = Eigen::VectorXd::Zero(total);
  for (Eigen::Index t = 0; t < count; ++t) {
    Eigen::Index flat = 0;
    for (int a = 0; a < dims; ++a) {
      flat = flat * bins +
             bin_index(sample.values(t * dims + a), lo[a], width[a], bins);
    }
    h.counts(flat) += 1.0;
  }
  h.bin_edges.resize(total + 1);
  for (Eigen::Index j = 0; j <= total; ++j) {
    h.bin_edges(j) = static_cast<double>(j);
  }
  return h;
}

SpherePoint to_sqrt_density(const Histogram& h) {
  h.validate();
  const Eigen::VectorXd p = h.counts / h.counts.sum();
  return SpherePoint::project(p.array().sqrt().matrix());
}

RawSample add_noise_snr(const RawSample& sample, double snr, std::uint64_t seed) {
  sample.validate();
  if (!(snr > 0.0)) {
    throw std::invalid_argument("add_noise_snr: snr must be positive");
  }
  const double power = sample.values.squaredNorm() /
                       static_cast<double>(sample.values.size());
  const double stddev = std::sqrt(power / snr);
  RawSample out = sample;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index t = 0; t < out.values.size(); ++t) {
    out.values(t) += stddev * gauss(rng);
  }
  return out;
}

}  // namespace slrr
