#pragma once

#include <cstdint>
#include <vector>

#include "qpc/parallel.hpp"
#include "qpc/states.hpp"
#include "qpc/types.hpp"

namespace qpc {

// Positive operator valued measurement: PSD effects summing to the identity.
struct Povm {
  std::vector<Mat> effects;

  explicit Povm(std::vector<Mat> e);
  int size() const { return static_cast<int>(effects.size()); }
  int dim() const { return static_cast<int>(effects.front().rows()); }
};

enum class Method { HelstromExact, VnOptimized, Lsm, Evaluated };

// Optimizer metadata attached to every DiscriminationResult.
struct Certificate {
  int restarts = 0;
  int best_restart = -1;
  bool converged = true;
};

struct DiscriminationResult {
  double success_prob;
  double error_prob;
  Povm measurement;
  Method method;
  Certificate certificate;
};

// Σ_i η_i tr(M_i ρ_i) for a fixed POVM, one effect per ensemble member.
double success_probability(const Ensemble& e, const Povm& m);

// Wraps a fixed POVM evaluation as a DiscriminationResult (method Evaluated).
DiscriminationResult evaluate(const Ensemble& e, Povm m);

// Exact binary discrimination: Λ = η₁ρ₁ − η₂ρ₂, success = ½(1 + tr|Λ|),
// measurement {Π₊, I − Π₊} with Π₊ the support projector of Λ's positive
// part (zero modes go to the second outcome).
DiscriminationResult helstrom(const Ensemble& e);

// Least-square (pretty-good) measurement M_i = η_i ρ_out^{-1/2} ρ_i ρ_out^{-1/2}
// with ρ_out = Σ_i η_i ρ_i; the off-support projector is folded into effect 1.
Povm lsm_povm(const Ensemble& e);
double lsm_error(const Ensemble& e);
DiscriminationResult lsm_result(const Ensemble& e);

struct VnOptions {
  int restarts = 20;         // ascents per rank composition (index 0 is a warm start)
  int max_iters = 2000;
  int patience = 50;         // convergence window (iterations)
  double improve_tol = 1e-10;
  std::uint64_t seed = 0;
  par::Mode mode = par::execution_mode();
};

// Best von Neumann measurement found for the ensemble: maximizes
// Σ_i η_i tr(π_i ρ_i) over complete families of mutually orthogonal
// projectors. Exact (Helstrom) for ≤2 effective members; otherwise a
// certified lower bound on the optimal success probability, obtained by
// enumerating projector-rank compositions and running seeded geodesic
// ascent on the unitary conjugation of each fixed partition.
DiscriminationResult optimal_vn(const Ensemble& e, int joint_dim,
                                const VnOptions& opts = {});

}  // namespace qpc
