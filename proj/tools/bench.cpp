#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <functional>

#include "slrr/gram.hpp"
#include "slrr/parallel.hpp"
#include "slrr/solver.hpp"
#include "slrr/synth.hpp"

namespace {

// Best wall time over a few repetitions, in milliseconds.
double time_best_ms(const std::function<void()>& body, int reps = 5) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = omp_get_wtime();
    body();
    const double t1 = omp_get_wtime();
    best = std::min(best, (t1 - t0) * 1e3);
  }
  return best;
}

void report(const char* kernel, int n, double serial_ms, double parallel_ms) {
  std::printf("%-18s %6d %12.3f %12.3f %10.2fx\n", kernel, n, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", slrr::thread_cap());
  std::printf("%-18s %6s %12s %12s %10s\n", "kernel", "n", "serial ms",
              "parallel ms", "speedup");

  for (int n : {32, 64, 128, 256}) {
    slrr::SynthSpec spec;
    spec.k = 4;
    spec.n_per = n / 4;
    spec.m = 9;
    spec.spread = 0.05;
    spec.min_sep = 0.6;
    spec.seed = 7;
    const slrr::LabeledSphereSet data = slrr::generate(spec);

    const slrr::TangentFactors factors = slrr::build_tangent_factors(data.points);
    const slrr::GramSet grams = slrr::build_gram(factors);
    const slrr::GeodesicWeightMatrix gw =
        slrr::build_geodesic_weights(data.points, 1.0);

    slrr::SolverState state;
    state.w = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    state.y = Eigen::VectorXd::Zero(n);
    state.beta = 1e-6;

    report("tangent_factors", n,
           time_best_ms([&] { slrr::serial::build_tangent_factors(data.points); }),
           time_best_ms([&] { slrr::build_tangent_factors(data.points); }));
    report("gram", n,
           time_best_ms([&] { slrr::serial::build_gram(factors); }),
           time_best_ms([&] { slrr::build_gram(factors); }));
    report("pairwise_geodesic", n,
           time_best_ms([&] { slrr::serial::pairwise_geodesic(data.points); }),
           time_best_ms([&] { slrr::pairwise_geodesic(data.points); }));
    report("gradient", n,
           time_best_ms(
               [&] { slrr::serial::assemble_gradient(state, grams, gw.weights, 0.01); }),
           time_best_ms(
               [&] { slrr::assemble_gradient(state, grams, gw.weights, 0.01); }));
  }
  return 0;
}
