#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/QR>

#include <cmath>
#include <random>

#include "slrr/classify.hpp"
#include "slrr/solver.hpp"
#include "slrr/synth.hpp"
#include "support/oracles.hpp"

using namespace slrr;
namespace tst = slrr::testing;

namespace {

SpherePoint axis(int i, int dim) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(i) = 1.0;
  return SpherePoint(v);
}

}  // namespace

TEST_CASE("labeled set validation") {
  LabeledSphereSet set;
  set.points = {axis(0, 3), axis(1, 3)};
  set.labels = {0, 1};
  CHECK_NOTHROW(set.validate());
  CHECK(set.num_classes() == 2);

  set.labels = {0};
  CHECK_THROWS_AS(set.validate(), LengthMismatchError);
}

TEST_CASE("gknn predicts the nearest training label for k = 1") {
  LabeledSphereSet train;
  train.points = {axis(0, 3), axis(1, 3)};
  train.labels = {7, 9};
  // query 0.1 rad along the great circle from e1 towards e2
  const SpherePoint q = tst::slerp(train.points[0], train.points[1], 0.1 / (M_PI / 2));
  CHECK(gknn_predict(train, q, 1) == 7);
  const SpherePoint q2 = tst::slerp(train.points[0], train.points[1], 0.9);
  CHECK(gknn_predict(train, q2, 1) == 9);
}

TEST_CASE("gknn majority vote and tie rules") {
  LabeledSphereSet train;
  train.points = {axis(0, 4), axis(1, 4), axis(2, 4)};
  train.labels = {5, 3, 3};
  // equidistant from all three axes: votes are {5, 3, 3} for k = 3
  Eigen::VectorXd v(4);
  v << 1.0, 1.0, 1.0, 0.0;
  const SpherePoint q = SpherePoint::project(v);
  CHECK(gknn_predict(train, q, 3) == 3);

  // k = 2: the two nearest are tied in distance; lower indices win, votes
  // {5, 3} tie, smaller class id wins
  CHECK(gknn_predict(train, q, 2) == 3);
}

TEST_CASE("gknn input validation") {
  LabeledSphereSet empty;
  CHECK_THROWS_AS(gknn_predict(empty, axis(0, 3), 1), EmptyTrainError);
  LabeledSphereSet train;
  train.points = {axis(0, 3)};
  train.labels = {0};
  CHECK_THROWS_AS(gknn_predict(train, axis(1, 3), 0), std::invalid_argument);
  CHECK_THROWS_AS(gknn_predict(train, axis(1, 3), 5), std::invalid_argument);
}

TEST_CASE("gknn self prediction and global majority") {
  std::mt19937_64 rng(37);
  LabeledSphereSet train;
  for (int i = 0; i < 9; ++i) {
    train.points.push_back(tst::random_point(4, rng));
    train.labels.push_back(i < 5 ? 2 : 6);
  }
  // k = 1 on a training point returns its own label
  for (std::size_t i = 0; i < train.points.size(); ++i) {
    CHECK(gknn_predict(train, train.points[i], 1) == train.labels[i]);
  }
  // k = |train| is the global majority regardless of the query
  CHECK(gknn_predict(train, tst::random_point(4, rng), 9) == 2);
}

TEST_CASE("gknn is invariant under joint rotations") {
  std::mt19937_64 rng(41);
  LabeledSphereSet train;
  for (int i = 0; i < 12; ++i) {
    train.points.push_back(tst::random_point(3, rng));
    train.labels.push_back(static_cast<int>(rng() % 3));
  }
  const SpherePoint q = tst::random_point(3, rng);

  // random orthogonal map from the QR factorization of a Gaussian matrix
  Eigen::MatrixXd g(4, 4);
  for (int j = 0; j < 4; ++j) g.col(j) = tst::randn(4, rng);
  const Eigen::MatrixXd rot = Eigen::HouseholderQR<Eigen::MatrixXd>(g)
                                  .householderQ();
  LabeledSphereSet rotated;
  rotated.labels = train.labels;
  for (const SpherePoint& p : train.points) {
    rotated.points.push_back(SpherePoint::project(rot * p.coords()));
  }
  const SpherePoint rq = SpherePoint::project(rot * q.coords());
  for (int k = 1; k <= 5; ++k) {
    CHECK(gknn_predict(train, q, k) == gknn_predict(rotated, rq, k));
  }
}

TEST_CASE("gknn separates two synthetic classes") {
  SynthSpec spec;
  spec.k = 2;
  spec.n_per = 30;
  spec.m = 9;
  spec.spread = 0.05;
  spec.min_sep = 0.8;
  spec.seed = 3;
  const LabeledSphereSet data = generate(spec);

  // hold out every sixth point
  LabeledSphereSet train;
  std::vector<SpherePoint> test_pts;
  std::vector<int> test_labels;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    if (i % 6 == 0) {
      test_pts.push_back(data.points[i]);
      test_labels.push_back(data.labels[i]);
    } else {
      train.points.push_back(data.points[i]);
      train.labels.push_back(data.labels[i]);
    }
  }
  std::vector<int> pred;
  for (const SpherePoint& q : test_pts) {
    pred.push_back(gknn_predict(train, q, 3));
  }
  CHECK(accuracy(pred, test_labels) >= 0.9);
}

TEST_CASE("accuracy counts exact matches without relabeling") {
  CHECK(accuracy({1, 2, 3}, {1, 2, 4}) == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy({0, 0}, {1, 1}) == 0.0);
  CHECK_THROWS_AS(accuracy({0}, {0, 1}), LengthMismatchError);
  CHECK_THROWS_AS(accuracy({}, {}), std::invalid_argument);
}

TEST_CASE("lrr_feature_predict classifies by column similarity") {
  // 4 columns; columns 0,1 train with labels {4, 8}; columns 2,3 test.
  // Column 2 matches column 0, column 3 matches column 1.
  Eigen::MatrixXd w(3, 4);
  w.col(0) << 1.0, 0.0, 0.0;
  w.col(1) << 0.0, 1.0, 0.0;
  w.col(2) << 0.9, 0.1, 0.0;
  w.col(3) << 0.1, 0.9, 0.0;
  const std::vector<int> pred = lrr_feature_predict(w, {4, 8}, {2, 3}, 1);
  REQUIRE(pred.size() == 2);
  CHECK(pred[0] == 4);
  CHECK(pred[1] == 8);
}

TEST_CASE("lrr_feature_predict validation") {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(lrr_feature_predict(w, {0, 1}, {5}, 1), IndexError);
  CHECK_THROWS_AS(lrr_feature_predict(w, {0, 1}, {-1}, 1), IndexError);
  CHECK_THROWS_AS(lrr_feature_predict(w, {0}, {1, 1}, 1), IndexError);
  CHECK_THROWS_AS(lrr_feature_predict(w, {0, 1}, {1, 2}, 1), LengthMismatchError);
  CHECK_THROWS_AS(lrr_feature_predict(w, {}, {0, 1, 2}, 1), EmptyTrainError);
  CHECK_THROWS_AS(lrr_feature_predict(w, {0, 1}, {2}, 0), std::invalid_argument);
}

TEST_CASE("transductive solve plus column knn labels held-out points") {
  SynthSpec spec;
  spec.k = 2;
  spec.n_per = 30;
  spec.m = 9;
  spec.spread = 0.05;
  spec.min_sep = 0.8;
  spec.seed = 4;
  const LabeledSphereSet data = generate(spec);
  const int n = static_cast<int>(data.points.size());

  std::vector<int> test_cols;
  std::vector<int> train_labels;
  std::vector<int> test_truth;
  for (int i = 0; i < n; ++i) {
    if (i % 6 == 0) {
      test_cols.push_back(i);
      test_truth.push_back(data.labels[i]);
    } else {
      train_labels.push_back(data.labels[i]);
    }
  }

  SolverConfig cfg;
  cfg.lambda = 0.1;
  cfg.nu = 0.01;
  const SolveResult res = solve(data.points, cfg);
  REQUIRE(res.converged);
  const std::vector<int> pred =
      lrr_feature_predict(res.w, train_labels, test_cols, 3);
  CHECK(accuracy(pred, test_truth) >= 0.9);
}
