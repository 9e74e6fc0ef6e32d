#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slrr/pipeline.hpp"
#include "slrr/synth.hpp"

namespace {

using nlohmann::json;

// Exit codes: 0 ok, 1 I/O or unexpected failure, 2 validation,
// 3 solver did not converge, 4 degenerate result.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitDegenerate = 4;

struct CommonOpts {
  std::string input;
  std::string kind;
  int bins = 6;
  int dims = 1;
  double lambda = 0.1;
  double nu = 0.01;
  double sigma = 1.0;
  double mu_factor = 1.0;
  double eps = 1e-8;
  int max_iters = 1000;
  bool forbid_diagonal = false;
  std::uint64_t seed = 0;
};

void add_feature_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("input", o.input, "Input dataset (CSV or SLRR binary)")
      ->required();
  cmd->add_option("--kind", o.kind, "Input interpretation: raw, hist or sphere")
      ->check(CLI::IsMember({"raw", "hist", "sphere"}));
  cmd->add_option("--bins", o.bins, "Histogram bins per axis for raw input")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dims", o.dims, "Observation dimensionality for raw input")
      ->check(CLI::PositiveNumber);
}

void add_solver_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--lambda", o.lambda, "Nuclear norm weight");
  cmd->add_option("--nu", o.nu, "Weighted l1 sparsity weight");
  cmd->add_option("--sigma", o.sigma, "Geodesic weight bandwidth");
  cmd->add_option("--mu-factor", o.mu_factor, "Linearization weight factor");
  cmd->add_option("--eps", o.eps, "Constraint violation tolerance");
  cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
  cmd->add_flag("--forbid-diagonal", o.forbid_diagonal,
                "Zero the coefficient diagonal after each step");
}

slrr::FeatureConfig feature_config(const CommonOpts& o) {
  slrr::FeatureConfig fc;
  fc.kind = o.kind.empty() ? slrr::DataKind::unspecified : slrr::parse_kind(o.kind);
  fc.bins = o.bins;
  fc.dims = o.dims;
  return fc;
}

slrr::SolverConfig solver_config(const CommonOpts& o) {
  slrr::SolverConfig cfg;
  cfg.lambda = o.lambda;
  cfg.nu = o.nu;
  cfg.sigma = o.sigma;
  cfg.mu_factor = o.mu_factor;
  cfg.eps = o.eps;
  cfg.max_iters = o.max_iters;
  cfg.forbid_diagonal = o.forbid_diagonal;
  return cfg;
}

json config_json(const CommonOpts& o) {
  return json{{"input", o.input},
              {"kind", o.kind.empty() ? "auto" : o.kind},
              {"bins", o.bins},
              {"dims", o.dims},
              {"lambda", o.lambda},
              {"nu", o.nu},
              {"sigma", o.sigma},
              {"mu_factor", o.mu_factor},
              {"eps", o.eps},
              {"max_iters", o.max_iters},
              {"forbid_diagonal", o.forbid_diagonal},
              {"seed", o.seed}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw slrr::IoError("cannot write " + path);
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw slrr::IoError("write failed for " + path);
  }
}

void write_trace(const std::string& path, const slrr::SolverTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw slrr::IoError("cannot write " + path);
  }
  for (const slrr::TraceRecord& r : trace.records) {
    out << json{{"iter", r.iter},
                {"objective", r.objective},
                {"violation", r.violation},
                {"rank", r.rank},
                {"beta", r.beta},
                {"mu", r.mu}}
               .dump()
        << "\n";
  }
  if (!out) {
    throw slrr::IoError("write failed for " + path);
  }
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw slrr::IoError("cannot write " + path);
  }
  out << "label\n";
  for (int v : labels) {
    out << v << "\n";
  }
  if (!out) {
    throw slrr::IoError("write failed for " + path);
  }
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const slrr::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const slrr::DegenerateAffinityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const slrr::SeparationUnsatisfiable& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDegenerate;
  } catch (const slrr::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Low-rank representation on the sphere of square-root densities"};
  app.require_subcommand(1);

  CommonOpts fit_opts;
  std::string fit_out = "w.csv";
  std::string fit_trace = "trace.jsonl";
  CLI::App* fit = app.add_subcommand(
      "fit", "Solve for the low-rank coefficient matrix W");
  add_feature_flags(fit, fit_opts);
  add_solver_flags(fit, fit_opts);
  fit->add_option("--seed", fit_opts.seed, "Seed (reserved; fit is seed-free)");
  fit->add_option("--out", fit_out, "Output CSV for W");
  fit->add_option("--trace", fit_trace, "Output JSONL iteration trace");

  CommonOpts cl_opts;
  int cl_k = 0;
  std::string cl_method = "proposed";
  double cl_sigma_a = 0.0;
  std::string cl_affinity = "w";
  std::string cl_out = "labels.csv";
  std::string cl_results = "results.json";
  CLI::App* cluster = app.add_subcommand(
      "cluster", "Cluster with one of: proposed, ncut-raw, lrr-euclid, gncut, sc");
  add_feature_flags(cluster, cl_opts);
  add_solver_flags(cluster, cl_opts);
  cluster->add_option("--k", cl_k, "Number of clusters")
      ->required()
      ->check(CLI::PositiveNumber);
  cluster->add_option("--method", cl_method, "Clustering method")
      ->check(CLI::IsMember({"proposed", "ncut-raw", "lrr-euclid", "gncut", "sc"}));
  cluster->add_option("--sigma-a", cl_sigma_a,
                      "Kernel bandwidth (0 = median heuristic)");
  cluster->add_option("--affinity", cl_affinity,
                      "Affinity from W: w (|W| symmetrized) or wtw")
      ->check(CLI::IsMember({"w", "wtw"}));
  cluster->add_option("--seed", cl_opts.seed, "Clustering seed");
  cluster->add_option("--out", cl_out, "Output CSV for labels");
  cluster->add_option("--results", cl_results, "Output JSON for scores");

  CommonOpts cf_opts;
  std::string cf_method = "proposed";
  double cf_split = 0.8;
  int cf_k = 1;
  std::string cf_results = "results.json";
  CLI::App* classify = app.add_subcommand(
      "classify",
      "Classify with a seeded stratified split; proposed solves the model "
      "jointly on train + test (transductive) and runs kNN on W columns");
  add_feature_flags(classify, cf_opts);
  add_solver_flags(classify, cf_opts);
  classify->add_option("--method", cf_method, "proposed or gknn")
      ->check(CLI::IsMember({"proposed", "gknn"}));
  classify->add_option("--split", cf_split, "Training fraction");
  classify->add_option("--k", cf_k, "Neighbor count")->check(CLI::PositiveNumber);
  classify->add_option("--seed", cf_opts.seed, "Split seed");
  classify->add_option("--results", cf_results, "Output JSON for scores");

  CommonOpts ns_opts;
  int ns_k = 0;
  std::vector<std::string> ns_methods{"proposed", "sc"};
  std::vector<double> ns_snrs;
  bool ns_snr_db = false;
  int ns_trials = 1;
  double ns_sigma_a = 0.0;
  std::string ns_affinity = "w";
  std::string ns_out = "sweep.csv";
  CLI::App* sweep = app.add_subcommand(
      "noise-sweep",
      "Corrupt the input at each SNR, rebuild features and score methods");
  add_feature_flags(sweep, ns_opts);
  add_solver_flags(sweep, ns_opts);
  sweep->add_option("--k", ns_k, "Number of clusters")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--method", ns_methods, "Methods to score (repeatable)");
  sweep->add_option("--snr", ns_snrs, "SNR values (repeatable)")->required();
  sweep->add_flag("--snr-db", ns_snr_db, "Interpret --snr values as decibels");
  sweep->add_option("--trials", ns_trials, "Trials per SNR")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--sigma-a", ns_sigma_a,
                    "Kernel bandwidth (0 = median heuristic)");
  sweep->add_option("--affinity", ns_affinity, "Affinity from W: w or wtw")
      ->check(CLI::IsMember({"w", "wtw"}));
  sweep->add_option("--seed", ns_opts.seed, "Sweep seed");
  sweep->add_option("--out", ns_out, "Output long-format CSV");

  slrr::SynthSpec sy_spec;
  std::string sy_out = "synth.csv";
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate planted-cluster sphere data");
  synth->add_option("--k", sy_spec.k, "Cluster count")->check(CLI::PositiveNumber);
  synth->add_option("--n-per", sy_spec.n_per, "Points per cluster")
      ->check(CLI::PositiveNumber);
  synth->add_option("--m", sy_spec.m, "Sphere dimension (ambient m+1)")
      ->check(CLI::PositiveNumber);
  synth->add_option("--spread", sy_spec.spread, "Angular std dev (radians)");
  synth->add_option("--min-sep", sy_spec.min_sep,
                    "Minimum centroid separation (radians)");
  synth->add_option("--seed", sy_spec.seed, "Generation seed");
  synth->add_option("--out", sy_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (fit->parsed()) {
    return run_guarded([&] {
      const slrr::Dataset ds = slrr::read_dataset(fit_opts.input);
      const slrr::SphereData points =
          slrr::points_from_dataset(ds, feature_config(fit_opts));
      const slrr::SolveResult res = slrr::solve(points, solver_config(fit_opts));
      slrr::write_matrix_csv(fit_out, res.w);
      write_trace(fit_trace, res.trace);
      return res.converged ? kExitOk : kExitNotConverged;
    });
  }

  if (cluster->parsed()) {
    return run_guarded([&] {
      const slrr::Dataset ds = slrr::read_dataset(cl_opts.input);
      const slrr::SphereData points =
          slrr::points_from_dataset(ds, feature_config(cl_opts));
      slrr::ClusterRunConfig cfg;
      cfg.k = cl_k;
      cfg.seed = cl_opts.seed;
      cfg.sigma_a = cl_sigma_a;
      cfg.affinity = cl_affinity;
      cfg.solver = solver_config(cl_opts);
      const slrr::ClusterRunResult res = slrr::run_cluster_method(
          points, ds.labels, slrr::parse_cluster_method(cl_method), cfg);
      write_labels(cl_out, res.labels);
      json j = {{"method", cl_method},
                {"k", cl_k},
                {"seed", cl_opts.seed},
                {"converged", res.converged},
                {"config", config_json(cl_opts)}};
      j["config"]["sigma_a"] = cl_sigma_a;
      j["config"]["affinity"] = cl_affinity;
      if (res.accuracy.has_value()) {
        j["accuracy"] = *res.accuracy;
      } else {
        j["accuracy"] = nullptr;
      }
      write_json(cl_results, j);
      return res.converged ? kExitOk : kExitNotConverged;
    });
  }

  if (classify->parsed()) {
    return run_guarded([&] {
      const slrr::Dataset ds = slrr::read_dataset(cf_opts.input);
      if (!ds.labels.has_value()) {
        throw std::invalid_argument("classify: input has no label column");
      }
      slrr::LabeledSphereSet data;
      data.points = slrr::points_from_dataset(ds, feature_config(cf_opts));
      data.labels = *ds.labels;
      const slrr::ClassifyRunResult res = slrr::run_classify_method(
          data, slrr::parse_classify_method(cf_method), cf_split, cf_k,
          solver_config(cf_opts), cf_opts.seed);
      json j = {{"method", cf_method},
                {"accuracy", res.test_accuracy},
                {"n_train", res.n_train},
                {"n_test", res.n_test},
                {"split", cf_split},
                {"knn", cf_k},
                {"seed", cf_opts.seed},
                {"converged", res.converged},
                {"config", config_json(cf_opts)}};
      write_json(cf_results, j);
      return res.converged ? kExitOk : kExitNotConverged;
    });
  }

  if (sweep->parsed()) {
    return run_guarded([&] {
      const slrr::Dataset ds = slrr::read_dataset(ns_opts.input);
      std::vector<slrr::ClusterMethod> methods;
      methods.reserve(ns_methods.size());
      for (const std::string& name : ns_methods) {
        methods.push_back(slrr::parse_cluster_method(name));
      }
      std::vector<double> snrs = ns_snrs;
      if (ns_snr_db) {
        for (double& s : snrs) s = std::pow(10.0, s / 10.0);
      }
      slrr::ClusterRunConfig cfg;
      cfg.k = ns_k;
      cfg.seed = ns_opts.seed;
      cfg.sigma_a = ns_sigma_a;
      cfg.affinity = ns_affinity;
      cfg.solver = solver_config(ns_opts);
      const std::vector<slrr::SweepRow> rows = slrr::run_noise_sweep(
          ds, feature_config(ns_opts), methods, snrs, ns_trials, cfg);
      std::ofstream out(ns_out, std::ios::binary);
      if (!out) {
        throw slrr::IoError("cannot write " + ns_out);
      }
      out << "method,snr,trial,accuracy\n";
      for (const slrr::SweepRow& r : rows) {
        out << r.method << "," << slrr::format_double(r.snr) << "," << r.trial
            << "," << slrr::format_double(r.accuracy) << "\n";
      }
      if (!out) {
        throw slrr::IoError("write failed for " + ns_out);
      }
      return kExitOk;
    });
  }

  return run_guarded([&] {
    const slrr::LabeledSphereSet data = slrr::generate(sy_spec);
    slrr::Dataset ds;
    ds.values = slrr::coords_matrix(data.points);
    ds.labels = data.labels;
    ds.kind = slrr::DataKind::sphere;
    slrr::write_dataset_csv(sy_out, ds);
    return kExitOk;
  });
}
