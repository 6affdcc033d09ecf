#pragma once

#include <cstdint>

#include "qpc/qsd.hpp"
#include "qpc/states.hpp"
#include "qpc/types.hpp"

namespace qpc {

enum class PcMethod { HelstromReduction, VnOptimized, ClosedFormAffinity, ClosedFormXstate };
enum class Exactness { Exact, UpperBound };

const char* pc_method_name(PcMethod m);
const char* exactness_name(Exactness e);

// A partial-coherence value together with its witness: the closest
// partial-incoherent state found, how it was obtained, and whether the value
// is exact or only an upper bound on the true minimum distance.
struct CoherenceReport {
  double value;
  Kind kind;
  DensityMatrix cpis;
  PcMethod method;
  Exactness exactness;
  Certificate certificate;  // meaningful when method == VnOptimized
};

// Knobs for the von Neumann optimizer behind the fidelity measure.
struct PcOptions {
  int vn_restarts = 20;
  int vn_max_iters = 2000;
  std::uint64_t seed = 24601;
  par::Mode mode = par::execution_mode();
};

// The discrimination ensemble {ω_i, η_i} with η_i = tr⟨i|ρ|i⟩ and
// ω_i = η_i⁻¹ √ρ (|i⟩⟨i|⊗I) √ρ, in the state's reference a-basis.
// Members with η_i below kZeroPrior are dropped; Σ η_i ω_i = ρ.
Ensemble qsd_ensemble_of(const BipartiteState& rho);

// min over partial-incoherent σ of d_F(ρ,σ) = 1 − P_S of the ensemble above
// under the best von Neumann measurement (exact Helstrom route for ≤2
// effective members).
CoherenceReport fidelity_partial_coherence(const BipartiteState& rho,
                                           const PcOptions& opts = {});

// Closed form 1 − Σ_i tr(B_i²) with B_i = ⟨i|√ρ|i⟩, plus the explicit CPIS
// built from the eigenvectors of the B_i.
CoherenceReport affinity_partial_coherence(const BipartiteState& rho);

CoherenceReport partial_coherence(const BipartiteState& rho, Kind kind,
                                  const PcOptions& opts = {});

// Single-system coherence: the n_b = 1 special case of the measures above.
CoherenceReport fidelity_coherence(const DensityMatrix& rho, const Mat& basis,
                                   const PcOptions& opts = {});
CoherenceReport affinity_coherence(const DensityMatrix& rho, const Mat& basis);

// A direct closed form for (2,n) X-states (diagonal + anti-diagonal support):
// value = ½(1 − Σ_{i<n} √((ρ_ii + ρ_jj)² − 4|ρ_ji|²)), j = 2n−1−i.
CoherenceReport xstate_fidelity_pc(const BipartiteState& rho,
                                   bool require_invertible = false);

}  // namespace qpc
