#include "slrr/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace slrr {

namespace {

// Indices of the k smallest distances, ties by lower index. dist is paired
// with original indices before the partial sort so the order is total.
std::vector<int> k_smallest(const std::vector<double>& dist, int k) {
  std::vector<int> order(dist.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

// Majority class among the voters; ties go to the smaller class id.
int majority(const std::vector<int>& voters, const std::vector<int>& labels) {
  std::map<int, int> votes;
  for (int i : voters) votes[labels[i]] += 1;
  int best_label = votes.begin()->first;
  int best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {
      best_label = label;
      best_count = count;
    }
  }
  return best_label;
}

}  // namespace

void LabeledSphereSet::validate() const {
  if (points.size() != labels.size()) {
    throw LengthMismatchError("LabeledSphereSet: points and labels differ");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].dim() != points[0].dim()) {
      throw DimensionError("LabeledSphereSet: mixed point dimensions");
    }
  }
}

int LabeledSphereSet::num_classes() const {
  std::set<int> ids(labels.begin(), labels.end());
  return static_cast<int>(ids.size());
}

int gknn_predict(const LabeledSphereSet& train, const SpherePoint& query,
                 int k) {
  train.validate();
  if (train.points.empty()) {
    throw EmptyTrainError("gknn_predict: empty training set");
  }
  if (k < 1 || k > static_cast<int>(train.points.size())) {
    throw std::invalid_argument("gknn_predict: need 1 <= k <= |train|");
  }
  std::vector<double> dist(train.points.size());
  for (std::size_t i = 0; i < train.points.size(); ++i) {
    dist[i] = geodesic_distance(train.points[i], query);
  }
  return majority(k_smallest(dist, k), train.labels);
}

std::vector<int> lrr_feature_predict(const Eigen::MatrixXd& w,
                                     const std::vector<int>& labels,
                                     const std::vector<int>& test_cols, int k) {
  const int n = static_cast<int>(w.cols());
  std::vector<char> is_test(n, 0);
  for (int c : test_cols) {
    if (c < 0 || c >= n) {
      throw IndexError("lrr_feature_predict: test column out of range");
    }
    if (is_test[c]) {
      throw IndexError("lrr_feature_predict: duplicate test column");
    }
    is_test[c] = 1;
  }
  std::vector<int> train_cols;
  train_cols.reserve(n - test_cols.size());
  for (int c = 0; c < n; ++c) {
    if (!is_test[c]) train_cols.push_back(c);
  }
  if (train_cols.empty()) {
    throw EmptyTrainError("lrr_feature_predict: no training columns left");
  }
  if (labels.size() != train_cols.size()) {
    throw LengthMismatchError(
        "lrr_feature_predict: one label per training column required");
  }
  if (k < 1 || k > static_cast<int>(train_cols.size())) {
    throw std::invalid_argument("lrr_feature_predict: need 1 <= k <= |train|");
  }

  std::vector<int> pred;
  pred.reserve(test_cols.size());
  std::vector<double> dist(train_cols.size());
  for (int t : test_cols) {
    for (std::size_t i = 0; i < train_cols.size(); ++i) {
      dist[i] = (w.col(train_cols[i]) - w.col(t)).norm();
    }
    pred.push_back(majority(k_smallest(dist, k), labels));
  }
  return pred;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatchError("accuracy: label lengths differ");
  }
  if (pred.empty()) {
    throw std::invalid_argument("accuracy: empty labels");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    hits += pred[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace slrr
