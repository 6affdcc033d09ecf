#include "qpc/partialcoh.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "qpc/linalg.hpp"

namespace qpc {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

bool basis_is_identity(const Mat& b) {
  return (b - Mat::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() <= 1e-14;
}

// State matrix in the frame where the reference a-basis is computational.
Mat rebased_matrix(const BipartiteState& rho) {
  if (basis_is_identity(rho.basis_a)) return rho.state.mat();
  const Mat joint = linalg::kron(rho.basis_a, Mat::Identity(rho.n_b, rho.n_b));
  return linalg::symmetrized(joint.adjoint() * rho.state.mat() * joint);
}

Mat rotate_back(const BipartiteState& rho, const Mat& sigma_rebased) {
  if (basis_is_identity(rho.basis_a)) return sigma_rebased;
  const Mat joint = linalg::kron(rho.basis_a, Mat::Identity(rho.n_b, rho.n_b));
  return linalg::symmetrized(joint * sigma_rebased * joint.adjoint());
}

struct Reduction {
  Mat sqrt_rho;                 // √ρ in the rebased frame
  std::vector<double> eta;      // block weights, all n_a of them
  std::vector<int> active;      // indices with η_i ≥ kZeroPrior
  double active_mass = 0.0;

  // ω_i for an active index, built from the block columns C_i = √ρ (|i⟩⟨i|⊗I).
  Mat omega(int i, int n_b) const {
    const auto c = sqrt_rho.middleCols(static_cast<Eigen::Index>(i) * n_b, n_b);
    return linalg::symmetrized((c * c.adjoint()) / eta[static_cast<std::size_t>(i)]);
  }
};

Reduction reduce(const Mat& rho_mat, int n_a, int n_b) {
  Reduction red;
  red.sqrt_rho = linalg::psd_sqrt(rho_mat);
  red.eta.resize(static_cast<std::size_t>(n_a));
  for (int i = 0; i < n_a; ++i) {
    red.eta[static_cast<std::size_t>(i)] =
        rho_mat.block(static_cast<Eigen::Index>(i) * n_b,
                      static_cast<Eigen::Index>(i) * n_b, n_b, n_b)
            .trace()
            .real();
    if (red.eta[static_cast<std::size_t>(i)] >= kZeroPrior) {
      red.active.push_back(i);
      red.active_mass += red.eta[static_cast<std::size_t>(i)];
    }
  }
  return red;
}

Ensemble reduced_ensemble(const Reduction& red, int n_b) {
  std::vector<Ensemble::Member> members;
  members.reserve(red.active.size());
  for (int i : red.active) {
    members.push_back({red.eta[static_cast<std::size_t>(i)] / red.active_mass,
                       DensityMatrix(red.omega(i, n_b))});
  }
  return Ensemble(std::move(members));
}

// Closest partial-incoherent state induced by a family of projectors:
// σ = (1/N) Σ_i |i⟩⟨i| ⊗ C_i† π_i C_i with C_i the block columns of √ρ and N
// the achieved success mass, so the result always has unit trace.
Mat cpis_from_projectors(const Reduction& red, const std::vector<Mat>& pi, int n_a,
                         int n_b) {
  const int d = n_a * n_b;
  Mat sigma = Mat::Zero(d, d);
  double norm = 0.0;
  for (int i = 0; i < n_a; ++i) {
    if (pi[static_cast<std::size_t>(i)].size() == 0) continue;
    const auto c = red.sqrt_rho.middleCols(static_cast<Eigen::Index>(i) * n_b, n_b);
    const Mat block =
        linalg::symmetrized(c.adjoint() * pi[static_cast<std::size_t>(i)] * c);
    sigma.block(static_cast<Eigen::Index>(i) * n_b, static_cast<Eigen::Index>(i) * n_b,
                n_b, n_b) = block;
    norm += block.trace().real();
  }
  return sigma / norm;
}

}  // namespace

const char* pc_method_name(PcMethod m) {
  switch (m) {
    case PcMethod::HelstromReduction: return "helstrom-reduction";
    case PcMethod::VnOptimized: return "vn-optimized";
    case PcMethod::ClosedFormAffinity: return "closed-form-affinity";
    case PcMethod::ClosedFormXstate: return "closed-form-xstate";
  }
  return "unknown";
}

const char* exactness_name(Exactness e) {
  return e == Exactness::Exact ? "exact" : "upper_bound";
}

Ensemble qsd_ensemble_of(const BipartiteState& rho) {
  const Mat rho_mat = rebased_matrix(rho);
  Reduction red = reduce(rho_mat, rho.n_a, rho.n_b);
  const bool rotate = !basis_is_identity(rho.basis_a);
  const Mat joint =
      rotate ? linalg::kron(rho.basis_a, Mat::Identity(rho.n_b, rho.n_b)) : Mat();
  std::vector<Ensemble::Member> members;
  members.reserve(red.active.size());
  for (int i : red.active) {
    Mat w = red.omega(i, rho.n_b);
    if (rotate) w = linalg::symmetrized(joint * w * joint.adjoint());
    members.push_back({red.eta[static_cast<std::size_t>(i)] / red.active_mass,
                       DensityMatrix(std::move(w))});
  }
  return Ensemble(std::move(members));
}

CoherenceReport fidelity_partial_coherence(const BipartiteState& rho,
                                           const PcOptions& opts) {
  const int n_a = rho.n_a;
  const int n_b = rho.n_b;
  const int d = n_a * n_b;
  const Mat rho_mat = rebased_matrix(rho);
  Reduction red = reduce(rho_mat, n_a, n_b);

  std::vector<Mat> pi(static_cast<std::size_t>(n_a));
  double success = 0.0;
  PcMethod method = PcMethod::HelstromReduction;
  Exactness exactness = Exactness::Exact;
  Certificate cert{};

  if (red.active.size() == 1) {
    pi[static_cast<std::size_t>(red.active[0])] = Mat::Identity(d, d);
    success = red.active_mass;
  } else {
    const Ensemble reduced = reduced_ensemble(red, n_b);
    const DiscriminationResult result = [&] {
      if (red.active.size() == 2) return helstrom(reduced);
      VnOptions vn;
      vn.restarts = opts.vn_restarts;
      vn.max_iters = opts.vn_max_iters;
      vn.seed = opts.seed;
      vn.mode = opts.mode;
      return optimal_vn(reduced, d, vn);
    }();
    if (red.active.size() > 2) {
      method = PcMethod::VnOptimized;
      cert = result.certificate;
      exactness = (is_linearly_independent(reduced, linalg::kSupportTieTol) &&
                   cert.converged)
                      ? Exactness::Exact
                      : Exactness::UpperBound;
    }
    success = red.active_mass * result.success_prob;
    for (std::size_t a = 0; a < red.active.size(); ++a) {
      pi[static_cast<std::size_t>(red.active[a])] = result.measurement.effects[a];
    }
  }

  const double value = clamp01(1.0 - success);
  Mat sigma = rotate_back(rho, cpis_from_projectors(red, pi, n_a, n_b));
  return {value,    Kind::Fidelity, DensityMatrix(std::move(sigma)),
          method,   exactness,      cert};
}

CoherenceReport affinity_partial_coherence(const BipartiteState& rho) {
  const int n_a = rho.n_a;
  const int n_b = rho.n_b;
  const int d = n_a * n_b;
  const Mat rho_mat = rebased_matrix(rho);
  const Mat root = linalg::psd_sqrt(rho_mat);

  double overlap = 0.0;  // Σ_i tr(B_i²)
  std::vector<Mat> blocks(static_cast<std::size_t>(n_a));
  for (int i = 0; i < n_a; ++i) {
    blocks[static_cast<std::size_t>(i)] =
        root.block(static_cast<Eigen::Index>(i) * n_b,
                   static_cast<Eigen::Index>(i) * n_b, n_b, n_b);
    overlap += (blocks[static_cast<std::size_t>(i)] * blocks[static_cast<std::size_t>(i)])
                   .trace()
                   .real();
  }

  Mat sigma = Mat::Zero(d, d);
  for (int i = 0; i < n_a; ++i) {
    const linalg::Spectrum s = linalg::eigh(blocks[static_cast<std::size_t>(i)]);
    RVec q = s.eigenvalues.array().square() / overlap;
    sigma.block(static_cast<Eigen::Index>(i) * n_b, static_cast<Eigen::Index>(i) * n_b,
                n_b, n_b) = s.eigenvectors * q.asDiagonal() * s.eigenvectors.adjoint();
  }

  const double value = clamp01(1.0 - overlap);
  Mat rotated = rotate_back(rho, sigma);
  return {value,
          Kind::Affinity,
          DensityMatrix(std::move(rotated)),
          PcMethod::ClosedFormAffinity,
          Exactness::Exact,
          {}};
}

CoherenceReport partial_coherence(const BipartiteState& rho, Kind kind,
                                  const PcOptions& opts) {
  return kind == Kind::Fidelity ? fidelity_partial_coherence(rho, opts)
                                : affinity_partial_coherence(rho);
}

CoherenceReport fidelity_coherence(const DensityMatrix& rho, const Mat& basis,
                                   const PcOptions& opts) {
  return fidelity_partial_coherence(BipartiteState(rho.dim(), 1, rho, basis), opts);
}

CoherenceReport affinity_coherence(const DensityMatrix& rho, const Mat& basis) {
  return affinity_partial_coherence(BipartiteState(rho.dim(), 1, rho, basis));
}

CoherenceReport xstate_fidelity_pc(const BipartiteState& rho, bool require_invertible) {
  if (rho.n_a != 2) {
    throw DimensionMismatchError("X-state form needs an (2, n) split, got n_a = " +
                                 std::to_string(rho.n_a));
  }
  const int n = rho.n_b;
  const int d = 2 * n;
  const Mat m = rebased_matrix(rho);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (c != r && c != d - 1 - r && m(r, c) != cplx(0.0, 0.0)) {
        throw NotXPatternError("entry (" + std::to_string(r) + "," + std::to_string(c) +
                               ") breaks the X pattern");
      }
    }
  }
  if (require_invertible) {
    const double lam_min = linalg::eigh(m).eigenvalues.minCoeff();
    if (lam_min <= 1e-10) {
      throw NotInvertibleError("smallest eigenvalue " + std::to_string(lam_min));
    }
  }

  double paired = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = d - 1 - i;
    const double diag_sum = m(i, i).real() + m(j, j).real();
    const double disc = diag_sum * diag_sum - 4.0 * std::norm(m(j, i));
    paired += std::sqrt(std::max(0.0, disc));
  }
  const double value = clamp01(0.5 * (1.0 - paired));

  // Witness projectors from the Helstrom split of Λ = √ρ (σ_z ⊗ I) √ρ.
  Reduction red = reduce(m, 2, n);
  Mat z = Mat::Zero(d, d);
  z.topLeftCorner(n, n) = Mat::Identity(n, n);
  z.bottomRightCorner(n, n) = -Mat::Identity(n, n);
  const Mat lambda = linalg::symmetrized(red.sqrt_rho * z * red.sqrt_rho);
  linalg::JordanParts parts = linalg::positive_part(lambda);
  std::vector<Mat> pi(2);
  pi[0] = std::move(parts.projector);
  pi[1] = Mat::Identity(d, d) - pi[0];

  Mat sigma = rotate_back(rho, cpis_from_projectors(red, pi, 2, n));
  return {value,
          Kind::Fidelity,
          DensityMatrix(std::move(sigma)),
          PcMethod::ClosedFormXstate,
          Exactness::Exact,
          {}};
}

}  // namespace qpc
