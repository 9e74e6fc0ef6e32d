#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slrr/classify.hpp"
#include "slrr/clustering.hpp"
#include "slrr/io.hpp"
#include "slrr/solver.hpp"

namespace slrr {

/// Feature-extraction settings shared by the CLI commands.
struct FeatureConfig {
  DataKind kind = DataKind::unspecified;  // unspecified: file directive, else raw
  int bins = 6;
  int dims = 1;
};

/// Stacks point coordinates as rows of an n x (m+1) matrix.
Eigen::MatrixXd coords_matrix(const SphereData& data);

/// Converts a dataset to sphere points. kind=sphere validates unit rows,
/// kind=hist treats rows as bin counts, kind=raw histograms each row with
/// global per-axis ranges (so bins are comparable across samples) before
/// the square-root map.
SphereData points_from_dataset(const Dataset& ds, const FeatureConfig& fc);

enum class ClusterMethod { proposed, ncut_raw, lrr_euclid, gncut, sc };
ClusterMethod parse_cluster_method(const std::string& name);
std::string to_string(ClusterMethod method);

struct ClusterRunConfig {
  int k = 2;
  std::uint64_t seed = 0;
  double sigma_a = 0.0;  // kernel bandwidth; 0 selects the median heuristic
  std::string affinity = "w";  // "w" or "wtw" for the solver-based methods
  SolverConfig solver;
};

struct ClusterRunResult {
  std::vector<int> labels;
  std::optional<double> accuracy;
  bool converged = true;  // stays true for the solver-free methods
  std::optional<Eigen::MatrixXd> w;
};

/// Runs one clustering method end to end: proposed (manifold solver),
/// lrr_euclid (Euclidean-mode solver, nuclear norm only), sc (Euclidean
/// solver, weighted l1 only), gncut (geodesic kernel), ncut_raw (Gaussian
/// kernel on coordinates). Scores against truth when given.
ClusterRunResult run_cluster_method(const SphereData& points,
                                    const std::optional<std::vector<int>>& truth,
                                    ClusterMethod method,
                                    const ClusterRunConfig& cfg);

enum class ClassifyMethod { proposed, gknn };
ClassifyMethod parse_classify_method(const std::string& name);
std::string to_string(ClassifyMethod method);

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
};

/// Seeded stratified split; each class contributes round(split * count)
/// training points, clamped so classes with >= 2 members keep at least one
/// point on each side.
SplitIndices stratified_split(const std::vector<int>& labels, double split,
                              std::uint64_t seed);

struct ClassifyRunResult {
  double test_accuracy = 0.0;
  int n_train = 0;
  int n_test = 0;
  bool converged = true;
};

/// Classification protocols: gknn votes among geodesic neighbors; proposed
/// solves the manifold model jointly on train + test (transductive) and
/// runs kNN on coefficient columns.
ClassifyRunResult run_classify_method(const LabeledSphereSet& data,
                                      ClassifyMethod method, double split,
                                      int k_neighbors,
                                      const SolverConfig& solver,
                                      std::uint64_t seed);

struct SweepRow {
  std::string method;
  double snr;
  int trial;
  double accuracy;
};

/// Noise-robustness sweep: for each (snr, trial) the raw dataset is
/// corrupted at that SNR with a trial-derived seed, features are rebuilt,
/// and every method is scored on the same corrupted instance. Rows come
/// back sorted by (method, snr, trial) and are deterministic given the
/// seed regardless of thread count.
std::vector<SweepRow> run_noise_sweep(const Dataset& ds,
                                      const FeatureConfig& fc,
                                      const std::vector<ClusterMethod>& methods,
                                      const std::vector<double>& snrs,
                                      int trials, const ClusterRunConfig& cfg);

}  // namespace slrr
