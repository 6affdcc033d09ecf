#pragma once

#include <optional>
#include <vector>

#include "qpc/linalg.hpp"
#include "qpc/states.hpp"
#include "qpc/types.hpp"

namespace qpc {

// Similarity of subnormalized PSD blocks (no unit-trace requirement). The
// scaling and block-additivity properties are stated at this level, and the
// partial-coherence internals need it for K ρ K† branches.
double fidelity_raw(const Mat& a, const Mat& b);
double affinity_raw(const Mat& a, const Mat& b);
double similarity_raw(const Mat& a, const Mat& b, Kind kind);

// tr|√ρ√σ| resp. tr(√ρ√σ), clamped into [0,1]; the pre-clamp overshoot is
// recorded in the diagnostics channel below.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double affinity(const DensityMatrix& rho, const DensityMatrix& sigma);
double similarity(const DensityMatrix& rho, const DensityMatrix& sigma, Kind kind);

// d_X = 1 − X².
double distance(const DensityMatrix& rho, const DensityMatrix& sigma, Kind kind);

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& phi);

// One subselection outcome. `state` is empty when the branch probability is
// below kZeroPrior; such branches are excluded from averages.
struct Branch {
  double probability;
  std::optional<DensityMatrix> state;
};

std::vector<Branch> subselect(const DensityMatrix& rho, const KrausChannel& phi);

enum class WeightSide { Rho, Sigma };

// d_X(ρ,σ) − Σ_i w_i d_X(ρ_i,σ_i) over the channel's subselection branches,
// with w_i the ρ-side (default) or σ-side branch probabilities. Nonnegative up
// to round-off for every channel — that is the strong-contractibility claim.
// Branches where either side falls below kZeroPrior are skipped; if the
// skipped weight mass reaches 1e-10 the average is no longer meaningful and a
// NumericalError is raised.
double contractibility_slack(const DensityMatrix& rho, const DensityMatrix& sigma,
                             const KrausChannel& phi, Kind kind,
                             WeightSide side = WeightSide::Rho);

namespace metrics_diag {
// Largest out-of-range excursion seen before clamping a similarity into
// [0,1]; process-wide atomic max, reset by test harnesses.
double max_overshoot();
void reset_overshoot();
}  // namespace metrics_diag

}  // namespace qpc
