#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "slrr/gram.hpp"

namespace slrr {

enum class SolverMode { manifold, euclidean };

struct SolverConfig {
  double lambda = 0.1;   // nuclear-norm weight
  double nu = 0.0;       // weighted-l1 weight
  double sigma = 1.0;    // geodesic weight scale
  double beta0 = 1e-6;
  double beta_max = 1e10;
  double rho = 1.1;
  double eps = 1e-8;     // constraint tolerance on column sums
  int max_iters = 1000;
  double mu_factor = 1.0;
  bool forbid_diagonal = false;
  SolverMode mode = SolverMode::manifold;
  std::optional<Eigen::MatrixXd> w_init;  // default: uniform feasible matrix
  int n_max = 2000;

  void validate() const;  // throws std::invalid_argument
};

struct SolverState {
  Eigen::MatrixXd w;   // n x n, column i is the representation of x_i
  Eigen::VectorXd y;   // Lagrange multipliers, one per column constraint
  double beta = 1e-6;
  int iter = 0;
};

struct TraceRecord {
  int iter;
  double objective;
  double violation;  // max_i |sum_j W_ji - 1|
  int rank;          // singular values > 1e-8 * sigma_max
  double beta;       // penalty used in this iteration's step
  double mu;         // linearization weight used in this iteration's step
};

struct SolverTrace {
  std::vector<TraceRecord> records;
};

struct SolveResult {
  Eigen::MatrixXd w;
  SolverTrace trace;
  bool converged = false;
};

/// Value of the full objective:
///   1/2 sum_i w_i^T Q_i w_i + lambda ||W||_* + nu sum_i sum_{j != i} g_ji |W_ji|.
double objective(const Eigen::MatrixXd& w, const GramSet& grams,
                 const Eigen::MatrixXd& weights, double lambda, double nu);

/// Gradient matrix of the penalized smooth-plus-l1-subgradient function F;
/// column i is Q_i w_i + nu s_i + (y_i + beta (sum_j W_ji - 1)) 1, where
/// (s_i)_j = g_ji sign(W_ji) off the diagonal and sign(0) = 0.
Eigen::MatrixXd assemble_gradient(const SolverState& state, const GramSet& grams,
                                  const Eigen::MatrixXd& weights, double nu);

namespace serial {
Eigen::MatrixXd assemble_gradient(const SolverState& state, const GramSet& grams,
                                  const Eigen::MatrixXd& weights, double nu);
}  // namespace serial

/// Proximal operator of tau ||.||_*: SVD followed by soft thresholding of the
/// singular values. Exact minimizer of 1/2 ||W - a||_F^2 + tau ||W||_*.
Eigen::MatrixXd svt(const Eigen::MatrixXd& a, double tau);

/// One linearized step: A = W - grad / mu, then svt(A, lambda / mu). Zeroes
/// the diagonal afterwards when forbid_diagonal is set.
Eigen::MatrixXd svt_step(const SolverState& state, const Eigen::MatrixXd& grad,
                         double mu, double lambda, bool forbid_diagonal = false);

/// y_i += beta (sum_j W_ji - 1), then beta <- min(rho beta, beta_max).
void update_multipliers(SolverState& state, const SolverConfig& config);

/// Largest eigenvalue over the Q_i (Lipschitz bound of the quadratic term).
double quadratic_lipschitz(const GramSet& grams);

/// Full pipeline: build factors, Gram matrices and weights from the data
/// (per the configured mode), then run the ALM loop.
SolveResult solve(const SphereData& data, const SolverConfig& config);

/// ALM loop on preassembled inputs.
SolveResult solve_assembled(const GramSet& grams, const GeodesicWeightMatrix& gw,
                            const SolverConfig& config);

}  // namespace slrr
