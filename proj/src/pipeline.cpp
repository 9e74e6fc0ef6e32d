#include "slrr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>

#include "slrr/features.hpp"
#include "slrr/gram.hpp"
#include "slrr/parallel.hpp"

namespace slrr {

namespace {

// Seed streams for derived generators; distinct constants keep the noise,
// clustering, and split substreams from colliding.
constexpr std::uint64_t kStreamCluster = 0;
constexpr std::uint64_t kStreamSampleBase = 1;

SphereData sphere_rows(const Eigen::MatrixXd& values) {
  SphereData points;
  points.reserve(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    try {
      points.emplace_back(values.row(i).transpose());
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("row " + std::to_string(i) +
                                  " is not a unit vector");
    }
  }
  return points;
}

SphereData hist_rows(const Eigen::MatrixXd& values) {
  SphereData points;
  points.reserve(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    Histogram h;
    h.counts = values.row(i).transpose();
    h.bin_edges.setLinSpaced(h.counts.size() + 1, 0.0,
                             static_cast<double>(h.counts.size()));
    points.push_back(to_sqrt_density(h));
  }
  return points;
}

SphereData raw_rows(const Eigen::MatrixXd& values, int bins, int dims) {
  if (values.cols() % dims != 0) {
    throw DimensionError("raw ingestion: row length not a multiple of dims");
  }
  // Global per-axis ranges so every sample is binned on the same grid.
  std::vector<std::pair<double, double>> ranges(dims);
  for (int a = 0; a < dims; ++a) {
    double lo = values(0, a), hi = values(0, a);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      for (Eigen::Index j = a; j < values.cols(); j += dims) {
        lo = std::min(lo, values(i, j));
        hi = std::max(hi, values(i, j));
      }
    }
    ranges[a] = {lo, hi + 1e-12};
  }
  SphereData points;
  points.reserve(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    RawSample s;
    s.values = values.row(i).transpose();
    s.id = "row_" + std::to_string(i);
    points.push_back(to_sqrt_density(histogram_md(s, bins, dims, ranges)));
  }
  return points;
}

ClusterRunConfig solver_config_for(ClusterMethod method,
                                   const ClusterRunConfig& cfg) {
  ClusterRunConfig out = cfg;
  switch (method) {
    case ClusterMethod::proposed:
      out.solver.mode = SolverMode::manifold;
      break;
    case ClusterMethod::lrr_euclid:
      // nuclear-norm-only Euclidean baseline
      out.solver.mode = SolverMode::euclidean;
      out.solver.nu = 0.0;
      break;
    case ClusterMethod::sc:
      // weighted-l1-only Euclidean baseline
      out.solver.mode = SolverMode::euclidean;
      out.solver.lambda = 0.0;
      break;
    default:
      break;
  }
  return out;
}

Eigen::MatrixXd sanitize_counts(Eigen::MatrixXd values) {
  values = values.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (!(values.row(i).sum() > 0.0)) {
      values.row(i).setOnes();
    }
  }
  return values;
}

SphereData noised_points(const Dataset& ds, const FeatureConfig& fc,
                         DataKind kind, double snr, std::uint64_t trial_seed) {
  Eigen::MatrixXd noisy(ds.values.rows(), ds.values.cols());
  for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
    RawSample s;
    s.values = ds.values.row(i).transpose();
    s.id = ds.ids.size() > static_cast<std::size_t>(i) ? ds.ids[i] : "";
    noisy.row(i) =
        add_noise_snr(s, snr,
                      mix_seed(trial_seed, kStreamSampleBase +
                                               static_cast<std::uint64_t>(i)))
            .values.transpose();
  }
  switch (kind) {
    case DataKind::raw:
      return raw_rows(noisy, fc.bins, fc.dims);
    case DataKind::hist:
      return hist_rows(sanitize_counts(std::move(noisy)));
    case DataKind::sphere: {
      // Corrupted coordinates are folded back onto the valid square-root
      // density region: take magnitudes and renormalize.
      SphereData points;
      points.reserve(noisy.rows());
      for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
        Eigen::VectorXd v = noisy.row(i).transpose().cwiseAbs();
        if (!(v.norm() > 0.0)) {
          v.setZero();
          v(0) = 1.0;
        }
        points.push_back(SpherePoint::project(std::move(v)));
      }
      return points;
    }
    default:
      throw std::invalid_argument("noise sweep: unresolved data kind");
  }
}

}  // namespace

Eigen::MatrixXd coords_matrix(const SphereData& data) {
  if (data.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), data[0].dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = data[i].coords().transpose();
  }
  return m;
}

SphereData points_from_dataset(const Dataset& ds, const FeatureConfig& fc) {
  if (ds.values.rows() == 0 || ds.values.cols() == 0) {
    throw std::invalid_argument("dataset is empty");
  }
  DataKind kind = fc.kind != DataKind::unspecified ? fc.kind : ds.kind;
  if (kind == DataKind::unspecified) {
    kind = DataKind::raw;
  }
  switch (kind) {
    case DataKind::sphere:
      return sphere_rows(ds.values);
    case DataKind::hist:
      return hist_rows(ds.values);
    default:
      return raw_rows(ds.values, fc.bins, fc.dims);
  }
}

ClusterMethod parse_cluster_method(const std::string& name) {
  if (name == "proposed") return ClusterMethod::proposed;
  if (name == "ncut-raw") return ClusterMethod::ncut_raw;
  if (name == "lrr-euclid") return ClusterMethod::lrr_euclid;
  if (name == "gncut") return ClusterMethod::gncut;
  if (name == "sc") return ClusterMethod::sc;
  throw std::invalid_argument("unknown clustering method: " + name);
}

std::string to_string(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::proposed: return "proposed";
    case ClusterMethod::ncut_raw: return "ncut-raw";
    case ClusterMethod::lrr_euclid: return "lrr-euclid";
    case ClusterMethod::gncut: return "gncut";
    case ClusterMethod::sc: return "sc";
  }
  return "proposed";
}

ClusterRunResult run_cluster_method(const SphereData& points,
                                    const std::optional<std::vector<int>>& truth,
                                    ClusterMethod method,
                                    const ClusterRunConfig& cfg) {
  const int n = static_cast<int>(points.size());
  if (cfg.k < 1 || cfg.k > n) {
    throw std::invalid_argument("cluster: need 1 <= k <= n");
  }
  if (cfg.affinity != "w" && cfg.affinity != "wtw") {
    throw std::invalid_argument("cluster: affinity must be 'w' or 'wtw'");
  }
  if (truth.has_value() && static_cast<int>(truth->size()) != n) {
    throw LengthMismatchError("cluster: truth labels length mismatch");
  }

  ClusterRunResult result;
  Affinity aff;
  switch (method) {
    case ClusterMethod::proposed:
    case ClusterMethod::lrr_euclid:
    case ClusterMethod::sc: {
      const ClusterRunConfig run = solver_config_for(method, cfg);
      SolveResult sr = solve(points, run.solver);
      result.converged = sr.converged;
      aff = cfg.affinity == "wtw" ? affinity_wtw(sr.w) : affinity_from_w(sr.w);
      result.w = std::move(sr.w);
      break;
    }
    case ClusterMethod::gncut: {
      const Eigen::MatrixXd dist = pairwise_geodesic(points);
      const double sigma_a =
          cfg.sigma_a > 0.0 ? cfg.sigma_a : median_offdiagonal(dist);
      aff = geodesic_affinity(points, sigma_a);
      break;
    }
    case ClusterMethod::ncut_raw: {
      const Eigen::MatrixXd rows = coords_matrix(points);
      double sigma_a = cfg.sigma_a;
      if (!(sigma_a > 0.0)) {
        Eigen::MatrixXd dist(n, n);
        dist.setZero();
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            dist(i, j) = dist(j, i) = (rows.row(i) - rows.row(j)).norm();
          }
        }
        sigma_a = median_offdiagonal(dist);
      }
      aff = gaussian_affinity(rows, sigma_a);
      break;
    }
  }

  result.labels = ncut(aff, cfg.k, cfg.seed).labels;
  if (truth.has_value()) {
    result.accuracy = clustering_accuracy(result.labels, *truth);
  }
  return result;
}

ClassifyMethod parse_classify_method(const std::string& name) {
  if (name == "proposed") return ClassifyMethod::proposed;
  if (name == "gknn") return ClassifyMethod::gknn;
  throw std::invalid_argument("unknown classification method: " + name);
}

std::string to_string(ClassifyMethod method) {
  return method == ClassifyMethod::proposed ? "proposed" : "gknn";
}

SplitIndices stratified_split(const std::vector<int>& labels, double split,
                              std::uint64_t seed) {
  if (!(split > 0.0 && split < 1.0)) {
    throw std::invalid_argument("split fraction must be in (0, 1)");
  }
  if (labels.empty()) {
    throw std::invalid_argument("split: labels must be nonempty");
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    groups[labels[i]].push_back(static_cast<int>(i));
  }
  SplitIndices out;
  for (auto& [label, idx] : groups) {
    std::mt19937_64 rng(
        mix_seed(seed, static_cast<std::uint64_t>(
                           static_cast<std::int64_t>(label))));
    std::shuffle(idx.begin(), idx.end(), rng);
    const int count = static_cast<int>(idx.size());
    int n_train = static_cast<int>(std::lround(split * count));
    if (count >= 2) {
      n_train = std::clamp(n_train, 1, count - 1);
    } else {
      n_train = count;
    }
    for (int t = 0; t < count; ++t) {
      (t < n_train ? out.train : out.test).push_back(idx[t]);
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

ClassifyRunResult run_classify_method(const LabeledSphereSet& data,
                                      ClassifyMethod method, double split,
                                      int k_neighbors,
                                      const SolverConfig& solver,
                                      std::uint64_t seed) {
  data.validate();
  if (data.num_classes() < 2) {
    throw std::invalid_argument("classify: need at least two classes");
  }
  const SplitIndices idx = stratified_split(data.labels, split, seed);
  if (idx.test.empty()) {
    throw std::invalid_argument("classify: split left no test points");
  }

  std::vector<int> truth;
  truth.reserve(idx.test.size());
  for (int i : idx.test) truth.push_back(data.labels[i]);

  ClassifyRunResult result;
  result.n_train = static_cast<int>(idx.train.size());
  result.n_test = static_cast<int>(idx.test.size());

  std::vector<int> pred;
  if (method == ClassifyMethod::gknn) {
    LabeledSphereSet train;
    train.points.reserve(idx.train.size());
    train.labels.reserve(idx.train.size());
    for (int i : idx.train) {
      train.points.push_back(data.points[i]);
      train.labels.push_back(data.labels[i]);
    }
    pred.reserve(idx.test.size());
    for (int i : idx.test) {
      pred.push_back(gknn_predict(train, data.points[i], k_neighbors));
    }
  } else {
    SolverConfig run = solver;
    run.mode = SolverMode::manifold;
    SolveResult sr = solve(data.points, run);
    result.converged = sr.converged;
    std::vector<int> train_labels;
    train_labels.reserve(idx.train.size());
    for (int i : idx.train) train_labels.push_back(data.labels[i]);
    pred = lrr_feature_predict(sr.w, train_labels, idx.test, k_neighbors);
  }

  result.test_accuracy = accuracy(pred, truth);
  return result;
}

std::vector<SweepRow> run_noise_sweep(const Dataset& ds,
                                      const FeatureConfig& fc,
                                      const std::vector<ClusterMethod>& methods,
                                      const std::vector<double>& snrs,
                                      int trials, const ClusterRunConfig& cfg) {
  if (!ds.labels.has_value()) {
    throw std::invalid_argument("noise sweep: labeled input required");
  }
  if (methods.empty() || snrs.empty() || trials < 1) {
    throw std::invalid_argument("noise sweep: need methods, snrs, trials >= 1");
  }
  for (double s : snrs) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("noise sweep: snr values must be positive");
    }
  }
  DataKind kind = fc.kind != DataKind::unspecified ? fc.kind : ds.kind;
  if (kind == DataKind::unspecified) kind = DataKind::raw;

  const int n_snr = static_cast<int>(snrs.size());
  const int n_methods = static_cast<int>(methods.size());
  const int cells = n_snr * trials;
  // accuracy indexed [cell][method]; filled independently per cell so the
  // grid loop can run in parallel without affecting output order
  std::vector<std::vector<double>> acc(cells,
                                       std::vector<double>(n_methods, 0.0));
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
  for (int cell = 0; cell < cells; ++cell) {
    try {
      const int s_idx = cell / trials;
      const int trial = cell % trials;
      const std::uint64_t trial_seed =
          mix_seed(cfg.seed, 1 + static_cast<std::uint64_t>(cell));
      const SphereData points =
          noised_points(ds, fc, kind, snrs[s_idx], trial_seed);
      for (int m = 0; m < n_methods; ++m) {
        ClusterRunConfig run = cfg;
        run.seed = mix_seed(trial_seed, kStreamCluster);
        const ClusterRunResult r =
            run_cluster_method(points, ds.labels, methods[m], run);
        acc[cell][m] = r.accuracy.value_or(0.0);
      }
    } catch (...) {
#pragma omp critical
      if (failure == nullptr) failure = std::current_exception();
    }
  }
  if (failure != nullptr) {
    std::rethrow_exception(failure);
  }

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(cells) * n_methods);
  for (int m = 0; m < n_methods; ++m) {
    for (int s_idx = 0; s_idx < n_snr; ++s_idx) {
      for (int trial = 0; trial < trials; ++trial) {
        rows.push_back({to_string(methods[m]), snrs[s_idx], trial,
                        acc[s_idx * trials + trial][m]});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.snr != b.snr) return a.snr < b.snr;
    return a.trial < b.trial;
  });
  return rows;
}

}  // namespace slrr
