#include "qpc/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <utility>
#include <vector>

#include "qpc/linalg.hpp"
#include "qpc/metrics.hpp"
#include "qpc/rng.hpp"

namespace qpc {

namespace {

struct Cluster {
  int start;
  int size;
};

std::vector<Cluster> degenerate_clusters(const RVec& ascending, double gap) {
  std::vector<Cluster> out;
  int start = 0;
  for (int i = 1; i <= ascending.size(); ++i) {
    if (i == ascending.size() || ascending[i] - ascending[i - 1] >= gap) {
      out.push_back({start, i - start});
      start = i;
    }
  }
  return out;
}

// Cheaper inner options for the many objective evaluations inside a descent;
// the best basis is re-scored with the caller's full options at the end.
PcOptions descent_inner(const PcOptions& inner) {
  PcOptions cheap = inner;
  cheap.vn_restarts = std::min(inner.vn_restarts, 4);
  cheap.vn_max_iters = std::min(inner.vn_max_iters, 600);
  return cheap;
}

double basis_objective(const BipartiteState& rho, const Mat& basis, Kind kind,
                       const PcOptions& opts) {
  const BipartiteState candidate(rho.n_a, rho.n_b, rho.state, basis);
  return partial_coherence(candidate, kind, opts).value;
}

// Random skew-Hermitian direction supported on the given clusters (strictly
// off-diagonal; diagonal phases do not move the objective).
Mat random_skew(const std::vector<Cluster>& clusters, int dim, Rng& rng) {
  Mat a = Mat::Zero(dim, dim);
  for (const Cluster& c : clusters) {
    if (c.size < 2) continue;
    for (int p = c.start; p < c.start + c.size; ++p) {
      for (int q = p + 1; q < c.start + c.size; ++q) {
        const cplx z = rng.cgaussian();
        a(p, q) = z;
        a(q, p) = -std::conj(z);
      }
    }
  }
  return a;
}

Mat expm_skew(const Mat& a) {
  const linalg::Spectrum s = linalg::eigh(cplx(0.0, -1.0) * a);
  Vec phases(a.rows());
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    phases[k] = std::exp(cplx(0.0, s.eigenvalues[k]));
  }
  return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

struct DescentOutcome {
  double value;
  Mat basis;
};

// Seeded stochastic descent of the partial-coherence objective over the
// rotations allowed by `clusters`, starting from `basis0` (columns already in
// cluster order). Step size adapts multiplicatively and stops below `tol`.
DescentOutcome rotation_descent(const BipartiteState& rho, Kind kind, Mat basis0,
                                const std::vector<Cluster>& clusters, Rng rng,
                                double tol, const PcOptions& eval_opts) {
  const int n_a = rho.n_a;
  DescentOutcome out{basis_objective(rho, basis0, kind, eval_opts), std::move(basis0)};
  bool movable = false;
  for (const Cluster& c : clusters) {
    if (c.size >= 2) movable = true;
  }
  if (!movable) return out;

  double step = 0.3;
  const double floor_step = std::max(tol, 1e-9);
  const int max_iters = 160;
  for (int iter = 0; iter < max_iters && step >= floor_step; ++iter) {
    const Mat direction = random_skew(clusters, n_a, rng);
    const Mat candidate = out.basis * expm_skew(step * direction);
    const double value = basis_objective(rho, candidate, kind, eval_opts);
    if (value < out.value) {
      out.value = value;
      out.basis = candidate;
      step *= 1.25;
    } else {
      step *= 0.7;
    }
  }
  return out;
}

}  // namespace

double gcc(const BipartiteState& rho, Kind kind, const PcOptions& opts) {
  const double joint = partial_coherence(rho, kind, opts).value;
  const Mat marginal = linalg::partial_trace(rho.state.mat(), rho.n_a, rho.n_b,
                                             linalg::Party::A);
  const CoherenceReport local =
      kind == Kind::Fidelity
          ? fidelity_coherence(DensityMatrix(marginal), rho.basis_a, opts)
          : affinity_coherence(DensityMatrix(marginal), rho.basis_a);
  const double value = joint - local.value;
  if (value < -1e-7) {
    std::cerr << "gcc negativity beyond tolerance: " << value << "\n";
  }
  return value;
}

CcResult correlated_coherence(const BipartiteState& rho, Kind kind, int restarts,
                              std::uint64_t seed, double tol, const PcOptions& inner) {
  const Mat marginal =
      linalg::partial_trace(rho.state.mat(), rho.n_a, rho.n_b, linalg::Party::A);
  const linalg::Spectrum spec = linalg::eigh(marginal);
  const std::vector<Cluster> clusters = degenerate_clusters(spec.eigenvalues, 1e-8);

  bool degenerate = false;
  for (const Cluster& c : clusters) {
    if (c.size >= 2) degenerate = true;
  }
  if (!degenerate) {
    const double value = basis_objective(rho, spec.eigenvectors, kind, inner);
    return {value, true, spec.eigenvectors};
  }

  const PcOptions cheap = descent_inner(inner);
  const Rng base(seed);
  const int runs = std::max(1, restarts);
  std::vector<DescentOutcome> outcomes(static_cast<std::size_t>(runs));
  par::for_each_index(
      runs,
      [&](int r) {
        Rng rng = base.fork(static_cast<std::uint64_t>(r));
        Mat start = spec.eigenvectors;
        if (r > 0) {
          Mat rot = Mat::Identity(rho.n_a, rho.n_a);
          for (std::size_t k = 0; k < clusters.size(); ++k) {
            const Cluster& c = clusters[k];
            if (c.size < 2) continue;
            rot.block(c.start, c.start, c.size, c.size) =
                random_unitary(c.size, rng.fork(k).seed());
          }
          start = start * rot;
        }
        outcomes[static_cast<std::size_t>(r)] = rotation_descent(
            rho, kind, std::move(start), clusters, rng.fork(7777), tol, cheap);
      },
      inner.mode);

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value < outcomes[best].value) best = r;
  }
  const double final_value =
      basis_objective(rho, outcomes[best].basis, kind, inner);
  return {std::min(final_value, outcomes[best].value), false,
          std::move(outcomes[best].basis)};
}

double pure_cc(const Vec& psi, int n_a, int n_b, Kind kind) {
  const SchmidtForm sf = schmidt(psi, n_a, n_b);
  if (kind == Kind::Fidelity) return 1.0 - sf.coefficients[0];
  return 1.0 - sf.coefficients.array().square().sum();
}

CcResult discord_estimate(const BipartiteState& rho, Kind kind, int restarts,
                          std::uint64_t seed, double tol, const PcOptions& inner) {
  CcResult best = correlated_coherence(rho, kind, restarts, seed, tol, inner);

  const std::vector<Cluster> full{{0, rho.n_a}};
  const PcOptions cheap = descent_inner(inner);
  const Rng base(seed);
  const int runs = std::max(1, restarts);
  std::vector<DescentOutcome> outcomes(static_cast<std::size_t>(runs));
  par::for_each_index(
      runs,
      [&](int r) {
        Rng rng = base.fork(0x0d15c0ULL).fork(static_cast<std::uint64_t>(r));
        Mat start = random_unitary(rho.n_a, rng.seed());
        outcomes[static_cast<std::size_t>(r)] = rotation_descent(
            rho, kind, std::move(start), full, rng.fork(1), tol, cheap);
      },
      inner.mode);

  std::size_t cand = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value < outcomes[cand].value) cand = r;
  }
  const double final_value = basis_objective(rho, outcomes[cand].basis, kind, inner);
  if (std::min(final_value, outcomes[cand].value) < best.value) {
    best.value = std::min(final_value, outcomes[cand].value);
    best.basis = std::move(outcomes[cand].basis);
  }
  best.exact = false;  // always an upper bound on the discord
  return best;
}

}  // namespace qpc
