#pragma once

#include <Eigen/Core>

#include <vector>

#include "slrr/errors.hpp"
#include "slrr/geometry.hpp"

namespace slrr {

/// Sphere points with integer class ids, one label per point.
struct LabeledSphereSet {
  SphereData points;
  std::vector<int> labels;

  void validate() const;
  /// Number of distinct class ids present.
  int num_classes() const;
};

/// Geodesic k-nearest-neighbor prediction: majority vote among the k
/// training points closest to query in geodesic distance. Distance ties
/// are broken by lower training index, vote ties by smaller class id.
/// Throws EmptyTrainError on an empty training set.
int gknn_predict(const LabeledSphereSet& train, const SpherePoint& query, int k);

/// k-nearest-neighbor classification of coefficient-matrix columns. W must
/// come from a joint solve over train + test points; test_cols lists the
/// held-out column indices and labels covers the remaining (train) columns
/// in ascending column order. Distances are Euclidean between columns of W;
/// tie rules match gknn_predict. Throws IndexError on out-of-range or
/// duplicate test columns.
std::vector<int> lrr_feature_predict(const Eigen::MatrixXd& w,
                                     const std::vector<int>& labels,
                                     const std::vector<int>& test_cols, int k);

/// Fraction of exact label matches (no id alignment; classification labels
/// are absolute).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace slrr
