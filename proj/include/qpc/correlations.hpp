#pragma once

#include <cstdint>

#include "qpc/partialcoh.hpp"
#include "qpc/states.hpp"

namespace qpc {

// Outcome of a basis minimization. `exact` is true only when the marginal
// spectrum is nondegenerate, so the eigenbasis is unique up to phases and no
// search was needed; otherwise the value is an upper bound on the true
// minimum. `basis` holds the best a-basis found (columns).
struct CcResult {
  double value;
  bool exact;
  Mat basis;
};

// Generalized correlated coherence: C^a_X(ρ) − C_X(tr_b ρ), both relative to
// the state's reference a-basis. Nonnegative up to optimizer slack; values
// below −1e-7 are logged to stderr and returned as-is.
double gcc(const BipartiteState& rho, Kind kind, const PcOptions& opts = {});

// Partial coherence minimized over eigenbases of the reduced state ρ^a.
// Eigenvalue clusters closer than 1e-8 are treated as degenerate and searched
// by seeded block-rotation descent; `tol` is the step size at which the
// descent stops.
CcResult correlated_coherence(const BipartiteState& rho, Kind kind, int restarts,
                              std::uint64_t seed, double tol = 1e-6,
                              const PcOptions& inner = {});

// Pure-state closed forms over the Schmidt weights λ:
// affinity 1 − Σ λ_i², fidelity 1 − λ_max.
double pure_cc(const Vec& psi, int n_a, int n_b, Kind kind);

// Upper bound on the geometric discord D_X: partial coherence minimized over
// all local a-bases by Haar-seeded descent. The search pool contains every
// basis probed by correlated_coherence with the same arguments, so the
// estimate never exceeds that value.
CcResult discord_estimate(const BipartiteState& rho, Kind kind, int restarts,
                          std::uint64_t seed, double tol = 1e-6,
                          const PcOptions& inner = {});

}  // namespace qpc
