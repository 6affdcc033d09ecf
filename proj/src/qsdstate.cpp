#include "qpc/qsdstate.hpp"

#include <algorithm>
#include <cmath>

#include "qpc/linalg.hpp"

namespace qpc {

BipartiteState build_qsd_state(const Ensemble& e) {
  const int n = e.size();
  const int m = e.dim();
  Mat a(m, static_cast<Eigen::Index>(n) * m);
  for (int i = 0; i < n; ++i) {
    const Ensemble::Member& mem = e.members[static_cast<std::size_t>(i)];
    a.middleCols(static_cast<Eigen::Index>(i) * m, m) =
        linalg::psd_sqrt(mem.prior * mem.state.mat());
  }
  return BipartiteState(n, m, DensityMatrix(linalg::symmetrized(a.adjoint() * a)));
}

RoundtripReport qsd_state_roundtrip(const Ensemble& e) {
  const BipartiteState rho = build_qsd_state(e);
  const Ensemble reduced = qsd_ensemble_of(rho);
  const int n = e.size();
  const int m = e.dim();

  RoundtripReport report;
  report.recovered_priors.assign(static_cast<std::size_t>(n), 0.0);
  report.max_prior_error = 0.0;
  report.max_spectrum_error = 0.0;

  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    const Ensemble::Member& mem = e.members[static_cast<std::size_t>(i)];
    if (mem.prior < kZeroPrior) continue;
    const Ensemble::Member& rec = reduced.members[next++];
    report.recovered_priors[static_cast<std::size_t>(i)] = rec.prior;
    report.max_prior_error =
        std::max(report.max_prior_error, std::abs(rec.prior - mem.prior));

    const RVec omega_spec = linalg::eigh(rec.state.mat()).eigenvalues;
    const RVec member_spec = linalg::eigh(mem.state.mat()).eigenvalues;
    RVec padded = RVec::Zero(omega_spec.size());
    padded.tail(m) = member_spec;  // ascending, zeros lead
    report.max_spectrum_error = std::max(
        report.max_spectrum_error, (omega_spec - padded).cwiseAbs().maxCoeff());
  }
  return report;
}

BoundReport discrimination_bound_check(const Ensemble& e, const PcOptions& opts) {
  const BipartiteState rho = build_qsd_state(e);
  BoundReport report;
  report.fidelity_pc = fidelity_partial_coherence(rho, opts).value;
  if (e.size() == 2) {
    report.reference_error = helstrom(e).error_prob;
  } else {
    VnOptions vn;
    vn.restarts = opts.vn_restarts;
    vn.max_iters = opts.vn_max_iters;
    vn.seed = opts.seed;
    vn.mode = opts.mode;
    report.reference_error = optimal_vn(e, e.dim(), vn).error_prob;
  }
  report.bound_holds = report.fidelity_pc >= report.reference_error - 1e-8;
  report.linearly_independent = is_linearly_independent(e, linalg::kSupportTieTol);
  report.equality = e.size() == 2 && report.linearly_independent &&
                    std::abs(report.fidelity_pc - report.reference_error) <= 1e-7;
  report.affinity_pc = affinity_partial_coherence(rho).value;
  report.lsm_error_value = lsm_error(e);
  report.lsm_identity_gap = std::abs(report.lsm_error_value - report.affinity_pc);
  return report;
}

}  // namespace qpc
