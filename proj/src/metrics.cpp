#include "qpc/metrics.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace qpc {

namespace {

std::atomic<double> g_overshoot{0.0};

void record_overshoot(double v) {
  double cur = g_overshoot.load(std::memory_order_relaxed);
  while (v > cur &&
         !g_overshoot.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

double clamp_unit(double x) {
  const double over = std::max(x - 1.0, -x);
  if (over > 0.0) record_overshoot(over);
  return std::min(1.0, std::max(0.0, x));
}

void require_same_shape(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("operands are " + std::to_string(a.rows()) + "x" +
                                 std::to_string(a.cols()) + " vs " +
                                 std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

namespace metrics_diag {
double max_overshoot() { return g_overshoot.load(std::memory_order_relaxed); }
void reset_overshoot() { g_overshoot.store(0.0, std::memory_order_relaxed); }
}  // namespace metrics_diag

double fidelity_raw(const Mat& a, const Mat& b) {
  require_same_shape(a, b);
  return linalg::trace_norm(linalg::psd_sqrt(a) * linalg::psd_sqrt(b));
}

double affinity_raw(const Mat& a, const Mat& b) {
  require_same_shape(a, b);
  return (linalg::psd_sqrt(a) * linalg::psd_sqrt(b)).trace().real();
}

double similarity_raw(const Mat& a, const Mat& b, Kind kind) {
  return kind == Kind::Fidelity ? fidelity_raw(a, b) : affinity_raw(a, b);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return clamp_unit(fidelity_raw(rho.mat(), sigma.mat()));
}

double affinity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return clamp_unit(affinity_raw(rho.mat(), sigma.mat()));
}

double similarity(const DensityMatrix& rho, const DensityMatrix& sigma, Kind kind) {
  return kind == Kind::Fidelity ? fidelity(rho, sigma) : affinity(rho, sigma);
}

double distance(const DensityMatrix& rho, const DensityMatrix& sigma, Kind kind) {
  const double x = similarity(rho, sigma, kind);
  return 1.0 - x * x;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& phi) {
  if (phi.dim_in() != rho.dim()) {
    throw DimensionMismatchError("channel input dim " + std::to_string(phi.dim_in()) +
                                 " vs state dim " + std::to_string(rho.dim()));
  }
  Mat out = Mat::Zero(phi.dim_out(), phi.dim_out());
  for (const Mat& k : phi.operators) out += k * rho.mat() * k.adjoint();
  return DensityMatrix(std::move(out));
}

std::vector<Branch> subselect(const DensityMatrix& rho, const KrausChannel& phi) {
  if (phi.dim_in() != rho.dim()) {
    throw DimensionMismatchError("channel input dim " + std::to_string(phi.dim_in()) +
                                 " vs state dim " + std::to_string(rho.dim()));
  }
  std::vector<Branch> out;
  out.reserve(phi.operators.size());
  for (const Mat& k : phi.operators) {
    // Symmetrize before normalizing so a small branch weight cannot amplify
    // asymmetric round-off past the density-matrix tolerance.
    Mat m = linalg::symmetrized(k * rho.mat() * k.adjoint());
    const double p = m.trace().real();
    if (p < kZeroPrior) {
      out.push_back(Branch{p, std::nullopt});
    } else {
      out.push_back(Branch{p, DensityMatrix(m / p)});
    }
  }
  return out;
}

double contractibility_slack(const DensityMatrix& rho, const DensityMatrix& sigma,
                             const KrausChannel& phi, Kind kind, WeightSide side) {
  require_same_shape(rho.mat(), sigma.mat());
  const std::vector<Branch> rb = subselect(rho, phi);
  const std::vector<Branch> sb = subselect(sigma, phi);
  double average = 0.0;
  double excluded = 0.0;
  for (std::size_t i = 0; i < rb.size(); ++i) {
    const double w = side == WeightSide::Rho ? rb[i].probability : sb[i].probability;
    if (!rb[i].state.has_value() || !sb[i].state.has_value()) {
      excluded += w;
      continue;
    }
    average += w * distance(*rb[i].state, *sb[i].state, kind);
  }
  if (excluded >= 1e-10) {
    throw NumericalError("contractibility average drops branch mass " +
                         std::to_string(excluded));
  }
  return distance(rho, sigma, kind) - average;
}

}  // namespace qpc
