#pragma once

#include <vector>

#include "qpc/partialcoh.hpp"
#include "qpc/qsd.hpp"
#include "qpc/states.hpp"

namespace qpc {

// Block embedding of a discrimination task into one bipartite state: the
// (nm)×(nm) matrix with blocks (i,j) = √(η_iρ_i)·√(η_jρ_j), split n_a = n,
// n_b = m. Zero-prior members stay in the layout as zero blocks.
BipartiteState build_qsd_state(const Ensemble& e);

struct RoundtripReport {
  std::vector<double> recovered_priors;  // source order; 0 for dropped members
  double max_prior_error;                // max |p_i − η_i| over kept members
  double max_spectrum_error;             // ω_i vs ρ_i eigenvalues (zero-padded)
};

// Builds the QSD-state, reduces it back to an ensemble, and reports how well
// the priors and member spectra are recovered (ω_i is unitarily equivalent to
// ρ_i, so the spectra must match).
RoundtripReport qsd_state_roundtrip(const Ensemble& e);

struct BoundReport {
  double fidelity_pc;      // C^a_F of the QSD-state
  double reference_error;  // helstrom error (2 members) or the vN-search bound
  bool bound_holds;        // fidelity_pc ≥ reference_error − 1e-8
  bool linearly_independent;
  bool equality;           // binary linearly independent case: |Δ| ≤ 1e-7
  double affinity_pc;      // C^a_A of the QSD-state
  double lsm_error_value;  // pretty-good-measurement error on the ensemble
  double lsm_identity_gap; // |lsm_error_value − affinity_pc|
};

BoundReport discrimination_bound_check(const Ensemble& e, const PcOptions& opts = {});

}  // namespace qpc
