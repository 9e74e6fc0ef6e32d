#include "slrr/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "slrr/parallel.hpp"

namespace slrr {

namespace {

void check_dims(const Eigen::MatrixXd& w, const GramSet& grams,
                const Eigen::MatrixXd& weights) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) {
    throw DimensionError("coefficient matrix must be square");
  }
  if (grams.size() != n) {
    throw DimensionError("Gram set size does not match coefficient matrix");
  }
  for (const auto& q : grams.mats) {
    if (q.rows() != n || q.cols() != n) {
      throw DimensionError("Gram matrix has wrong dimensions");
    }
  }
  if (weights.rows() != n || weights.cols() != n) {
    throw DimensionError("weight matrix has wrong dimensions");
  }
}

// Deterministic parallel quadratic term: per-column partials summed in
// index order so the result is independent of thread count.
double quadratic_term(const Eigen::MatrixXd& w, const GramSet& grams) {
  const Eigen::Index n = w.cols();
  std::vector<double> partial(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    partial[i] = w.col(i).dot(grams.mats[i] * w.col(i));
  }
  return 0.5 * std::accumulate(partial.begin(), partial.end(), 0.0);
}

// Soft-threshold the singular values of a; optionally reports them.
Eigen::MatrixXd svt_impl(const Eigen::MatrixXd& a, double tau,
                         Eigen::VectorXd* singular_values) {
  if (!a.allFinite()) {
    throw SvdFailure("svt: input matrix has non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdFailure("svt: SVD did not converge");
  }
  Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
  if (singular_values != nullptr) {
    *singular_values = s;
  }
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

int rank_of(const Eigen::VectorXd& singular_values) {
  const double smax = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
  if (smax <= 0.0) return 0;
  return static_cast<int>((singular_values.array() > 1e-8 * smax).count());
}

Eigen::MatrixXd uniform_init(Eigen::Index n, bool forbid_diagonal) {
  if (forbid_diagonal && n > 1) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n - 1));
    w.diagonal().setZero();
    return w;
  }
  return Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  if (!(nu >= 0.0)) throw std::invalid_argument("nu must be nonnegative");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(beta0 > 0.0)) throw std::invalid_argument("beta0 must be positive");
  if (!(beta_max >= beta0)) throw std::invalid_argument("beta_max must be >= beta0");
  if (!(rho > 1.0)) throw std::invalid_argument("rho must be > 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(mu_factor > 0.0)) throw std::invalid_argument("mu_factor must be positive");
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
}

double objective(const Eigen::MatrixXd& w, const GramSet& grams,
                 const Eigen::MatrixXd& weights, double lambda, double nu) {
  check_dims(w, grams, weights);
  double value = quadratic_term(w, grams);
  if (lambda != 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(w);
    value += lambda * svd.singularValues().sum();
  }
  if (nu != 0.0) {
    value += nu * (weights.array() * w.array().abs()).sum();
  }
  return value;
}

namespace {

Eigen::MatrixXd gradient_impl(const SolverState& state, const GramSet& grams,
                              const Eigen::MatrixXd& weights, double nu,
                              bool parallel) {
  check_dims(state.w, grams, weights);
  const Eigen::Index n = state.w.cols();
  if (state.y.size() != n) {
    throw DimensionError("multiplier vector has wrong length");
  }
  Eigen::MatrixXd grad(n, n);
  const auto column = [&](Eigen::Index i) {
    const double c = state.w.col(i).sum() - 1.0;
    Eigen::VectorXd g = grams.mats[i] * state.w.col(i);
    if (nu != 0.0) {
      // subgradient of the weighted l1 term, sign(0) = 0; the weight
      // diagonal is zero so W_ii contributes nothing
      g += nu * (weights.col(i).array() * state.w.col(i).array().sign()).matrix();
    }
    g.array() += state.y(i) + state.beta * c;
    grad.col(i) = g;
  };
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_cap())
    for (Eigen::Index i = 0; i < n; ++i) column(i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) column(i);
  }
  return grad;
}

}  // namespace

Eigen::MatrixXd assemble_gradient(const SolverState& state, const GramSet& grams,
                                  const Eigen::MatrixXd& weights, double nu) {
  return gradient_impl(state, grams, weights, nu, true);
}

namespace serial {
Eigen::MatrixXd assemble_gradient(const SolverState& state, const GramSet& grams,
                                  const Eigen::MatrixXd& weights, double nu) {
  return gradient_impl(state, grams, weights, nu, false);
}
}  // namespace serial

Eigen::MatrixXd svt(const Eigen::MatrixXd& a, double tau) {
  if (!(tau >= 0.0)) {
    throw std::invalid_argument("svt threshold must be nonnegative");
  }
  if (tau == 0.0) {
    return a;
  }
  return svt_impl(a, tau, nullptr);
}

Eigen::MatrixXd svt_step(const SolverState& state, const Eigen::MatrixXd& grad,
                         double mu, double lambda, bool forbid_diagonal) {
  if (!(mu > 0.0)) {
    throw std::invalid_argument("svt_step: mu must be positive");
  }
  const Eigen::MatrixXd a = state.w - grad / mu;
  Eigen::MatrixXd w = svt(a, lambda / mu);
  if (forbid_diagonal) {
    w.diagonal().setZero();
  }
  return w;
}

void update_multipliers(SolverState& state, const SolverConfig& config) {
  const Eigen::VectorXd c = state.w.colwise().sum().transpose().array() - 1.0;
  state.y += state.beta * c;
  state.beta = std::min(config.rho * state.beta, config.beta_max);
  state.iter += 1;
}

double quadratic_lipschitz(const GramSet& grams) {
  const Eigen::Index n = grams.size();
  std::vector<double> top(n, 0.0);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(grams.mats[i],
                                                       Eigen::EigenvaluesOnly);
    top[i] = eig.eigenvalues().maxCoeff();
  }
  return *std::max_element(top.begin(), top.end());
}

SolveResult solve_assembled(const GramSet& grams, const GeodesicWeightMatrix& gw,
                            const SolverConfig& config) {
  config.validate();
  const Eigen::Index n = grams.size();
  if (n < 2) {
    throw std::invalid_argument("solve: need at least two data points");
  }
  if (n > config.n_max) {
    throw std::invalid_argument("solve: dataset exceeds configured n_max cap");
  }

  SolverState state;
  if (config.w_init.has_value()) {
    if (config.w_init->rows() != n || config.w_init->cols() != n) {
      throw DimensionError("w_init has wrong dimensions");
    }
    if (!config.w_init->allFinite()) {
      throw std::invalid_argument("w_init must be finite");
    }
    state.w = *config.w_init;
  } else {
    state.w = uniform_init(n, config.forbid_diagonal);
  }
  state.y = Eigen::VectorXd::Zero(n);
  state.beta = config.beta0;
  state.iter = 0;

  const double lq = quadratic_lipschitz(grams);
  const double nd = static_cast<double>(n);

  SolveResult result;
  bool converged = false;
  while (state.iter < config.max_iters) {
    const Eigen::MatrixXd grad =
        assemble_gradient(state, grams, gw.weights, config.nu);
    // The linearization weight must dominate the Lipschitz constant of the
    // smooth part; the constraint penalty contributes beta * n (the rank-one
    // ones matrix has eigenvalue n), the quadratic term at most L_Q.
    const double mu = config.mu_factor * (nd * state.beta + lq);
    const Eigen::MatrixXd a = state.w - grad / mu;
    Eigen::VectorXd svals;
    state.w = svt_impl(a, config.lambda / mu, &svals);
    if (config.forbid_diagonal) {
      state.w.diagonal().setZero();
      Eigen::BDCSVD<Eigen::MatrixXd> svd(state.w);
      svals = svd.singularValues();
    }

    const double violation =
        (state.w.colwise().sum().array() - 1.0).abs().maxCoeff();
    double value = quadratic_term(state.w, grams) + config.lambda * svals.sum();
    if (config.nu != 0.0) {
      value += config.nu * (gw.weights.array() * state.w.array().abs()).sum();
    }

    TraceRecord rec;
    rec.iter = state.iter + 1;
    rec.objective = value;
    rec.violation = violation;
    rec.rank = rank_of(svals);
    rec.beta = state.beta;
    rec.mu = mu;

    update_multipliers(state, config);
    result.trace.records.push_back(rec);

    if (violation < config.eps) {
      converged = true;
      break;
    }
  }

  result.w = std::move(state.w);
  result.converged = converged;
  return result;
}

SolveResult solve(const SphereData& data, const SolverConfig& config) {
  config.validate();
  if (data.size() < 2) {
    throw std::invalid_argument("solve: need at least two data points");
  }
  if (static_cast<int>(data.size()) > config.n_max) {
    throw std::invalid_argument("solve: dataset exceeds configured n_max cap");
  }
  if (config.mode == SolverMode::euclidean) {
    const GramSet grams = build_gram(build_euclidean_factors(data));
    return solve_assembled(grams, unit_weights(grams.size()), config);
  }
  const GramSet grams = build_gram(build_tangent_factors(data));
  const GeodesicWeightMatrix gw = build_geodesic_weights(data, config.sigma);
  return solve_assembled(grams, gw, config);
}

}  // namespace slrr
