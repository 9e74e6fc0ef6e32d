// Acceptance gate: ten end-to-end criteria, one line of output each.
// Exits nonzero if any criterion fails. Tolerances are pinned here and not
// configurable; see each criterion for the exact bound.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slrr/classify.hpp"
#include "slrr/clustering.hpp"
#include "slrr/features.hpp"
#include "slrr/geometry.hpp"
#include "slrr/gram.hpp"
#include "slrr/pipeline.hpp"
#include "slrr/solver.hpp"
#include "slrr/synth.hpp"
#include "support/oracles.hpp"

namespace tst = slrr::testing;
namespace fs = std::filesystem;
using namespace slrr;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------- criterion 1
// Geometry roundtrip: 1e4 random (x, v) pairs per m in {2, 9, 49} with
// |v| <= pi/2: log_x(exp_x(v)) = v within 1e-9, and |log norm - distance|
// within 1e-9 on the same pairs.
Outcome criterion_geometry() {
  constexpr int kPairs = 10000;
  constexpr double kTol = 1e-9;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> norm_dist(0.0, M_PI / 2.0);
  double worst = 0.0;
  for (int m : {2, 9, 49}) {
    for (int t = 0; t < kPairs; ++t) {
      const SpherePoint x = tst::random_point(m, rng);
      const TangentVector v = tst::random_tangent(x, norm_dist(rng), rng);
      const SpherePoint y = exp_map(v);
      const TangentVector u = log_map(x, y);
      worst = std::max(worst, (u.vec() - v.vec()).norm());
      worst = std::max(worst, std::abs(u.norm() - geodesic_distance(x, y)));
      if (worst > kTol) {
        return {false, "roundtrip error " + std::to_string(worst)};
      }
    }
  }
  std::ostringstream ss;
  ss << "max err " << worst;
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 2
// Gram semidefiniteness: 100 random datasets (n <= 50, m <= 20); for every
// Q_i: min eigenvalue >= -1e-8 * max eigenvalue and
// ||Q_i - V_i^T V_i||_F <= 1e-10 * ||Q_i||_F against independently
// recomputed log maps.
Outcome criterion_psd() {
  std::mt19937_64 rng(1002);
  double worst_eig = 0.0, worst_rel = 0.0;
  for (int ds = 0; ds < 100; ++ds) {
    const int n = 5 + static_cast<int>(rng() % 46);
    const int m = 2 + static_cast<int>(rng() % 19);
    const SphereData data = tst::random_orthant_data(n, m, rng);
    const GramSet grams = build_gram(build_tangent_factors(data));
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd& q = grams.mats[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      if (lo < -1e-8 * std::max(hi, 0.0)) {
        return {false, "negative eigenvalue " + std::to_string(lo)};
      }
      worst_eig = std::min(worst_eig, hi > 0.0 ? lo / hi : 0.0);

      Eigen::MatrixXd vmat(m + 1, n);
      for (int j = 0; j < n; ++j) {
        vmat.col(j) = log_map(data[i], data[j]).vec();
      }
      const double rel =
          (q - vmat.transpose() * vmat).norm() / std::max(q.norm(), 1e-300);
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-10) {
        return {false, "factorization residual " + std::to_string(rel)};
      }
    }
  }
  std::ostringstream ss;
  ss << "min eig ratio " << worst_eig << ", max factor resid " << worst_rel;
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 3
// Quadratic-form equivalence: 1000 random (data, w with sum w = 1):
// |w^T Q_i w - ||sum_j w_j log_{x_i}(x_j)||^2| <= 1e-8 (1 + w^T Q_i w).
Outcome criterion_quadratic() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int m = 2 + static_cast<int>(rng() % 5);
    const SphereData data = tst::random_orthant_data(n, m, rng);
    const GramSet grams = build_gram(build_tangent_factors(data));
    Eigen::VectorXd w = tst::randn(n, rng);
    w.array() -= (w.sum() - 1.0) / n;
    const int i = static_cast<int>(rng() % n);
    const double quad = w.dot(grams.mats[i] * w);
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(m + 1);
    for (int j = 0; j < n; ++j) {
      combo += w(j) * log_map(data[i], data[j]).vec();
    }
    const double gap = std::abs(quad - combo.squaredNorm()) / (1.0 + quad);
    worst = std::max(worst, gap);
    if (gap > 1e-8) {
      return {false, "relative gap " + std::to_string(gap)};
    }
  }
  std::ostringstream ss;
  ss << "max rel gap " << worst;
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 4
// SVT prox exactness: 200 random matrices (n <= 20) with random tau. The
// output must satisfy the nuclear-norm prox subgradient conditions within
// 1e-8 and beat 50 random local perturbations each (1e4 total) on the prox
// objective.
Outcome criterion_svt() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> tau_dist(0.01, 2.0);
  std::uniform_real_distribution<double> scale_dist(0.01, 1.0);
  double worst_opt = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng() % 19);
    Eigen::MatrixXd a(n, n);
    for (int j = 0; j < n; ++j) a.col(j) = tst::randn(n, rng);
    const double tau = tau_dist(rng);
    const Eigen::MatrixXd x = svt(a, tau);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() > 0
                            ? svd.singularValues().maxCoeff()
                            : 0.0;
    const int r = static_cast<int>(
        (svd.singularValues().array() > 1e-9 * std::max(smax, 1.0)).count());
    const Eigen::MatrixXd g = a - x;
    if (r > 0) {
      const Eigen::MatrixXd ur = svd.matrixU().leftCols(r);
      const Eigen::MatrixXd vr = svd.matrixV().leftCols(r);
      const double dev =
          (ur.transpose() * g * vr - tau * Eigen::MatrixXd::Identity(r, r))
              .cwiseAbs()
              .maxCoeff() /
          tau;
      worst_opt = std::max(worst_opt, dev);
      if (dev > 1e-8) {
        return {false, "range-space optimality residual " + std::to_string(dev)};
      }
    }
    if (r < n) {
      const Eigen::MatrixXd un = svd.matrixU().rightCols(n - r);
      const Eigen::MatrixXd vn = svd.matrixV().rightCols(n - r);
      Eigen::JacobiSVD<Eigen::MatrixXd> rest(un.transpose() * g * vn);
      const double spectral = rest.singularValues().maxCoeff();
      if (spectral > tau * (1.0 + 1e-8) + 1e-8) {
        return {false, "null-space spectral excess " + std::to_string(spectral)};
      }
    }

    const double fx = tst::prox_objective(x, a, tau);
    for (int p = 0; p < 50; ++p) {
      Eigen::MatrixXd delta(n, n);
      for (int j = 0; j < n; ++j) delta.col(j) = tst::randn(n, rng);
      delta *= scale_dist(rng) / delta.norm();
      const double fp = tst::prox_objective(x + delta, a, tau);
      if (fp < fx - 1e-12) {
        return {false, "perturbation improved the prox objective by " +
                           std::to_string(fx - fp)};
      }
    }
  }
  std::ostringstream ss;
  ss << "max optimality residual " << worst_opt;
  return {true, ss.str()};
}

SynthSpec reference_spec(std::uint64_t seed, int n_per = 30) {
  SynthSpec spec;
  spec.k = 3;
  spec.n_per = n_per;
  spec.m = 9;
  spec.spread = 0.05;
  spec.min_sep = 0.8;
  spec.seed = seed;
  return spec;
}

SolverConfig reference_solver() {
  SolverConfig cfg;
  cfg.lambda = 0.1;
  cfg.nu = 0.01;
  cfg.sigma = 1.0;
  return cfg;
}

// ---------------------------------------------------------------- criterion 5
// Solver convergence: on the reference synth instance (k = 3, n = 90,
// m = 9, spread 0.05, min_sep 0.8; lambda 0.1, nu 0.01, sigma 1) the
// constraint violation drops below 1e-8 within 500 iterations. On an n = 15
// instance of the same family the final objective is within 1e-3 relative
// of a 1e6-step projected-subgradient oracle.
Outcome criterion_solver() {
  const LabeledSphereSet big = generate(reference_spec(101));
  SolverConfig cfg = reference_solver();
  cfg.max_iters = 500;
  const SolveResult res = solve(big.points, cfg);
  if (!res.converged) {
    return {false, "n = 90 instance missed 1e-8 violation in 500 iterations"};
  }

  const LabeledSphereSet small = generate(reference_spec(102, 5));
  const GramSet grams = build_gram(build_tangent_factors(small.points));
  const GeodesicWeightMatrix gw = build_geodesic_weights(small.points, 1.0);
  SolverConfig small_cfg = reference_solver();
  const SolveResult sres = solve(small.points, small_cfg);
  if (!sres.converged) {
    return {false, "n = 15 instance did not converge"};
  }
  const double alm =
      tst::model_objective(sres.w, grams, gw.weights, small_cfg.lambda,
                           small_cfg.nu);
  const tst::SubgradResult oracle = tst::subgradient_oracle(
      grams, gw.weights, small_cfg.lambda, small_cfg.nu, 1000000);
  const double rel = std::abs(alm - oracle.best_objective) /
                     std::max({std::abs(alm), std::abs(oracle.best_objective),
                               1e-12});
  if (rel > 1e-3) {
    std::ostringstream ss;
    ss << "objective " << alm << " vs oracle " << oracle.best_objective
       << " (rel " << rel << ")";
    return {false, ss.str()};
  }
  std::ostringstream ss;
  ss << res.trace.records.size() << " iters at n = 90, oracle rel gap " << rel;
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 6
// Init independence: 20 random instances (n <= 30), uniform vs random
// feasible initialization, final objectives within 1e-3 relative.
Outcome criterion_init_independence() {
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 5 + static_cast<int>(rng() % 26);
    const int m = 3 + static_cast<int>(rng() % 7);
    const SphereData data = tst::random_orthant_data(n, m, rng);

    SolverConfig uniform_cfg = reference_solver();
    const SolveResult a = solve(data, uniform_cfg);

    SolverConfig random_cfg = reference_solver();
    random_cfg.w_init = tst::random_feasible_init(n, rng);
    const SolveResult b = solve(data, random_cfg);

    if (!a.converged || !b.converged) {
      return {false, "instance " + std::to_string(t) + " did not converge"};
    }
    const double oa = a.trace.records.back().objective;
    const double ob = b.trace.records.back().objective;
    const double rel =
        std::abs(oa - ob) / std::max({std::abs(oa), std::abs(ob), 1e-12});
    worst = std::max(worst, rel);
    if (rel > 1e-3) {
      std::ostringstream ss;
      ss << "objectives " << oa << " vs " << ob << " (rel " << rel << ")";
      return {false, ss.str()};
    }
  }
  std::ostringstream ss;
  ss << "max rel objective gap " << worst;
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 7
// End-to-end clustering: reference instances over 10 seeds; proposed mean
// accuracy >= 0.95 and >= the raw-Ncut baseline mean on the same instances.
Outcome criterion_clustering() {
  double proposed_mean = 0.0, ncut_mean = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabeledSphereSet data = generate(reference_spec(seed));
    ClusterRunConfig cfg;
    cfg.k = 3;
    cfg.seed = seed;
    cfg.solver = reference_solver();
    const ClusterRunResult proposed = run_cluster_method(
        data.points, data.labels, ClusterMethod::proposed, cfg);
    const ClusterRunResult baseline = run_cluster_method(
        data.points, data.labels, ClusterMethod::ncut_raw, cfg);
    proposed_mean += proposed.accuracy.value();
    ncut_mean += baseline.accuracy.value();
  }
  proposed_mean /= 10.0;
  ncut_mean /= 10.0;
  std::ostringstream ss;
  ss << "proposed mean " << proposed_mean << ", ncut-raw mean " << ncut_mean;
  if (proposed_mean < 0.95 || proposed_mean < ncut_mean) {
    return {false, ss.str()};
  }
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 8
// Noise robustness: reference instance corrupted at snr in {0.8, 3.2, 12.8}
// with 5 trials each; proposed mean >= sc mean at snr 0.8, and proposed at
// snr 12.8 within 0.05 of its clean accuracy.
Outcome criterion_noise() {
  const LabeledSphereSet set = generate(reference_spec(103));
  Dataset ds;
  ds.kind = DataKind::sphere;
  ds.values = coords_matrix(set.points);
  ds.labels = set.labels;
  FeatureConfig fc;
  fc.kind = DataKind::sphere;
  ClusterRunConfig cfg;
  cfg.k = 3;
  cfg.seed = 0;
  cfg.solver = reference_solver();

  const ClusterRunResult clean = run_cluster_method(
      set.points, set.labels, ClusterMethod::proposed, cfg);
  const double clean_acc = clean.accuracy.value();

  const std::vector<SweepRow> rows = run_noise_sweep(
      ds, fc, {ClusterMethod::proposed, ClusterMethod::sc}, {0.8, 3.2, 12.8},
      5, cfg);
  const auto mean_of = [&rows](const std::string& method, double snr) {
    double sum = 0.0;
    int count = 0;
    for (const SweepRow& r : rows) {
      if (r.method == method && r.snr == snr) {
        sum += r.accuracy;
        ++count;
      }
    }
    return sum / count;
  };
  const double proposed_low = mean_of("proposed", 0.8);
  const double sc_low = mean_of("sc", 0.8);
  const double proposed_high = mean_of("proposed", 12.8);
  std::ostringstream ss;
  ss << "snr 0.8: proposed " << proposed_low << " vs sc " << sc_low
     << "; snr 12.8: " << proposed_high << " (clean " << clean_acc << ")";
  if (proposed_low < sc_low) {
    return {false, ss.str()};
  }
  if (std::abs(proposed_high - clean_acc) > 0.05) {
    return {false, ss.str()};
  }
  return {true, ss.str()};
}

// ---------------------------------------------------------------- criterion 9
// Feature pipeline: 1e4 random histograms map to unit-norm nonnegative
// sphere points (norm within 1e-12); counts (1, 3) map to
// (0.5, sqrt(0.75)) within 1e-15.
Outcome criterion_features() {
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> mass(0.0, 10.0);
  for (int t = 0; t < 10000; ++t) {
    const int bins = 2 + static_cast<int>(rng() % 29);
    Histogram h;
    h.counts.resize(bins);
    for (int b = 0; b < bins; ++b) {
      h.counts(b) = rng() % 4 == 0 ? 0.0 : mass(rng);
    }
    if (!(h.counts.sum() > 0.0)) h.counts(0) = 1.0;
    h.bin_edges.setLinSpaced(bins + 1, 0.0, static_cast<double>(bins));
    const SpherePoint p = to_sqrt_density(h);
    if (p.coords().minCoeff() < 0.0) {
      return {false, "negative coordinate"};
    }
    if (std::abs(p.coords().norm() - 1.0) > 1e-12) {
      return {false, "norm error " + std::to_string(p.coords().norm() - 1.0)};
    }
  }
  Histogram pair;
  pair.counts = Eigen::Vector2d(1.0, 3.0);
  pair.bin_edges = Eigen::Vector3d(0.0, 0.5, 1.0);
  const SpherePoint p = to_sqrt_density(pair);
  if (std::abs(p.coords()(0) - 0.5) > 1e-15 ||
      std::abs(p.coords()(1) - std::sqrt(0.75)) > 1e-15) {
    return {false, "counts (1,3) mapped off target"};
  }
  return {true, "1e4 histograms, exact (1,3) check"};
}

// --------------------------------------------------------------- criterion 10
// Determinism: the cluster and noise-sweep commands produce byte-identical
// outputs across two runs each under SLRR_THREADS=1 and SLRR_THREADS=8.
struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("slrr_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& env_prefix, const std::string& args) {
  const std::string cmd =
      env_prefix + " " + std::string(SLRR_CLI_PATH) + " " + args +
      " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  TempDir tmp;
  const std::string data = tmp.path("synth.csv");
  if (run_cli("", "synth --k 3 --n-per 15 --m 9 --spread 0.05 --min-sep 0.8 "
                  "--seed 17 --out " + data) != 0) {
    return {false, "synth generation failed"};
  }

  std::vector<std::string> cluster_outputs, sweep_outputs;
  for (const std::string threads : {"1", "8"}) {
    for (int rep = 0; rep < 2; ++rep) {
      const std::string tag = threads + "_" + std::to_string(rep);
      const std::string labels = tmp.path("labels_" + tag + ".csv");
      const std::string results = tmp.path("results_" + tag + ".json");
      if (run_cli("SLRR_THREADS=" + threads,
                  "cluster " + data + " --kind sphere --k 3 --method proposed "
                  "--seed 0 --out " + labels + " --results " + results) != 0) {
        return {false, "cluster run failed (threads " + threads + ")"};
      }
      cluster_outputs.push_back(slurp(labels) + slurp(results));

      const std::string sweep = tmp.path("sweep_" + tag + ".csv");
      if (run_cli("SLRR_THREADS=" + threads,
                  "noise-sweep " + data + " --kind sphere --k 3 "
                  "--method proposed --method sc --snr 0.8 --snr 12.8 "
                  "--trials 1 --seed 0 --out " + sweep) != 0) {
        return {false, "noise-sweep run failed (threads " + threads + ")"};
      }
      sweep_outputs.push_back(slurp(sweep));
    }
  }
  for (std::size_t i = 1; i < cluster_outputs.size(); ++i) {
    if (cluster_outputs[i] != cluster_outputs[0]) {
      return {false, "cluster outputs differ across runs/threads"};
    }
  }
  for (std::size_t i = 1; i < sweep_outputs.size(); ++i) {
    if (sweep_outputs[i] != sweep_outputs[0]) {
      return {false, "sweep outputs differ across runs/threads"};
    }
  }
  return {true, "4 cluster + 4 sweep runs byte-identical"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"geometry roundtrip", criterion_geometry},
      {"gram matrices semidefinite", criterion_psd},
      {"quadratic form equivalence", criterion_quadratic},
      {"svt prox exactness", criterion_svt},
      {"solver convergence vs oracle", criterion_solver},
      {"initialization independence", criterion_init_independence},
      {"end-to-end clustering", criterion_clustering},
      {"noise robustness trend", criterion_noise},
      {"feature pipeline", criterion_features},
      {"cli determinism across threads", criterion_determinism},
  };
  int failures = 0;
  int id = 0;
  for (const Entry& e : entries) {
    ++id;
    const double t0 = now_s();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    const double dt = now_s() - t0;
    std::printf("criterion %2d %-4s %-32s [%6.1fs] %s\n", id,
                out.pass ? "PASS" : "FAIL", e.name, dt, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
