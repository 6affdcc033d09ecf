// Compares the serial reference scheduler against the OpenMP one on two
// representative workloads and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qpc/parallel.hpp>
#include <qpc/partialcoh.hpp>
#include <qpc/qsd.hpp>
#include <qpc/rng.hpp>
#include <qpc/states.hpp>

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Workload 1: restart-parallel measurement optimization for one ensemble.
double bench_optimal_vn(int restarts, qpc::par::Mode mode, double& out_ms) {
  qpc::Rng rng(20240816);
  std::vector<qpc::Ensemble::Member> members;
  const double priors[3] = {0.5, 0.3, 0.2};
  for (int i = 0; i < 3; ++i) {
    members.push_back({priors[i], qpc::random_density(6, 2, rng.next_u64())});
  }
  const qpc::Ensemble e{std::move(members)};

  qpc::VnOptions opts;
  opts.restarts = restarts;
  opts.mode = mode;
  const auto t0 = Clock::now();
  const double value = qpc::optimal_vn(e, 6, opts).success_prob;
  out_ms = ms_since(t0);
  return value;
}

// Workload 2: a batch of partial-coherence evaluations, trial-parallel.
double bench_batch(int trials, qpc::par::Mode mode, double& out_ms) {
  std::vector<double> values(static_cast<std::size_t>(trials));
  const auto t0 = Clock::now();
  qpc::par::for_each_index(
      trials,
      [&](int t) {
        qpc::Rng rng(0xb0a710c0 + static_cast<std::uint64_t>(t));
        const qpc::BipartiteState rho(
            2, 3, qpc::random_density(6, 6, rng.next_u64()));
        values[static_cast<std::size_t>(t)] =
            qpc::fidelity_partial_coherence(rho).value +
            qpc::affinity_partial_coherence(rho).value;
      },
      mode);
  out_ms = ms_since(t0);
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial-vs-OpenMP benchmark for the optimizer and batch kernels"};
  int restarts = 64;
  int trials = 64;
  app.add_option("--restarts", restarts, "Optimizer restarts")->capture_default_str();
  app.add_option("--trials", trials, "Batch size")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::printf("OpenMP compiled in: %s\n", qpc::par::openmp_compiled() ? "yes" : "no");

  double serial_ms = 0.0, parallel_ms = 0.0;

  const double v_serial = bench_optimal_vn(restarts, qpc::par::Mode::Serial, serial_ms);
  const double v_openmp = bench_optimal_vn(restarts, qpc::par::Mode::OpenMP, parallel_ms);
  std::printf("optimal_vn  (%4d restarts): serial %9.2f ms | openmp %9.2f ms | x%.2f | %s\n",
              restarts, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              v_serial == v_openmp ? "identical" : "MISMATCH");
  if (v_serial != v_openmp) return 1;

  const double b_serial = bench_batch(trials, qpc::par::Mode::Serial, serial_ms);
  const double b_openmp = bench_batch(trials, qpc::par::Mode::OpenMP, parallel_ms);
  std::printf("batch pc    (%4d trials  ): serial %9.2f ms | openmp %9.2f ms | x%.2f | %s\n",
              trials, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              b_serial == b_openmp ? "identical" : "MISMATCH");
  if (b_serial != b_openmp) return 1;

  return 0;
}
