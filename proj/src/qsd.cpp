#include "qpc/qsd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "qpc/linalg.hpp"
#include "qpc/rng.hpp"

namespace qpc {

namespace {

constexpr double kEffectPsdTol = 1e-9;
constexpr double kPovmSumTol = 1e-8;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// --- exact binary split ------------------------------------------------

struct BinarySplit {
  double success;
  Mat pi_first;    // support projector of (w1 − w2)₊; zero modes go to the other side
  Mat pi_second;
};

BinarySplit binary_split(const Mat& w1, const Mat& w2, double weight_sum) {
  const Mat lambda = w1 - w2;
  linalg::JordanParts parts = linalg::positive_part(lambda);
  BinarySplit out;
  out.success = clamp01(0.5 * (weight_sum + linalg::trace_norm(lambda)));
  out.pi_first = std::move(parts.projector);
  out.pi_second = Mat::Identity(lambda.rows(), lambda.cols()) - out.pi_first;
  return out;
}

// --- rank compositions --------------------------------------------------

void enumerate_capped(const std::vector<int>& caps, int total,
                      std::vector<std::vector<int>>& out) {
  const int n = static_cast<int>(caps.size());
  std::vector<int> suffix_cap(static_cast<std::size_t>(n) + 1, 0);
  for (int i = n - 1; i >= 0; --i) suffix_cap[i] = suffix_cap[i + 1] + caps[i];
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    const int hi = std::min(caps[static_cast<std::size_t>(pos)], remaining);
    const int lo = std::max(0, remaining - suffix_cap[pos + 1]);
    for (int c = lo; c <= hi; ++c) {
      cur[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, total);
}

std::uint64_t composition_key(const std::vector<int>& comp, int base) {
  std::uint64_t key = 0;
  for (int c : comp) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(c);
  return key;
}

// --- geodesic ascent over U(d) -------------------------------------------

struct AscentOutcome {
  double value = 0.0;
  Mat u;
  bool converged = false;
};

double partition_objective(const std::vector<Mat>& w, const std::vector<int>& offsets,
                           const std::vector<int>& ranks, const Mat& u) {
  double f = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int r = ranks[i];
    if (r == 0) continue;
    const auto ub = u.middleCols(offsets[i], r);
    f += (ub.adjoint() * (w[i] * ub)).trace().real();
  }
  return f;
}

// Maximizes Σ_i tr(P_i U† W_i U) over unitary U by Riemannian gradient steps
// U ← exp(τΩ)U with Ω = GU† − UG†, G = Σ W_i U P_i, and a backtracking τ.
AscentOutcome geodesic_ascent(const std::vector<Mat>& w, const std::vector<int>& offsets,
                              const std::vector<int>& ranks, Mat u0,
                              const VnOptions& opts) {
  const int d = static_cast<int>(u0.rows());
  AscentOutcome out;
  out.u = std::move(u0);
  out.value = partition_objective(w, offsets, ranks, out.u);
  double tau = 0.1;
  double window_best = out.value;
  int window_start = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Mat g = Mat::Zero(d, d);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const int r = ranks[i];
      if (r == 0) continue;
      g.middleCols(offsets[i], r) = w[i] * out.u.middleCols(offsets[i], r);
    }
    const Mat omega = g * out.u.adjoint() - out.u * g.adjoint();
    if (omega.norm() < 1e-13) {
      out.converged = true;
      break;
    }
    const linalg::Spectrum hs = linalg::eigh(cplx(0.0, -1.0) * omega);
    bool accepted = false;
    while (tau >= 1e-16) {
      Vec phases(d);
      for (int k = 0; k < d; ++k) {
        phases[k] = std::exp(cplx(0.0, tau * hs.eigenvalues[k]));
      }
      Mat u_new = hs.eigenvectors * phases.asDiagonal() * hs.eigenvectors.adjoint() * out.u;
      const double f_new = partition_objective(w, offsets, ranks, u_new);
      if (f_new > out.value) {
        out.u = std::move(u_new);
        out.value = f_new;
        tau *= 1.3;
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      // No step along the gradient improves: numerically at a local maximum.
      out.converged = true;
      break;
    }
    if (out.value > window_best + opts.improve_tol) {
      window_best = out.value;
      window_start = iter;
    } else if (iter - window_start >= opts.patience) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// Deterministic warm start: greedily assign the eigenvectors of Σ_i W_i to the
// members they score highest under, respecting the rank partition.
Mat warm_start(const std::vector<Mat>& w, const std::vector<int>& offsets,
               const std::vector<int>& ranks, int d) {
  Mat pool = Mat::Zero(d, d);
  for (const Mat& wi : w) pool += wi;
  const linalg::Spectrum s = linalg::eigh(pool);
  const int n = static_cast<int>(w.size());

  struct Cand {
    double score;
    int member;
    int vec;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) {
    const Mat wv = w[static_cast<std::size_t>(i)] * s.eigenvectors;
    for (int k = 0; k < d; ++k) {
      cands.push_back({(s.eigenvectors.col(k).adjoint() * wv.col(k)).value().real(), i, k});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.member != b.member) return a.member < b.member;
    return a.vec < b.vec;
  });

  std::vector<int> remaining = ranks;
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  std::vector<std::vector<int>> assigned(static_cast<std::size_t>(n));
  for (const Cand& c : cands) {
    if (remaining[static_cast<std::size_t>(c.member)] == 0 ||
        used[static_cast<std::size_t>(c.vec)]) {
      continue;
    }
    assigned[static_cast<std::size_t>(c.member)].push_back(c.vec);
    used[static_cast<std::size_t>(c.vec)] = true;
    --remaining[static_cast<std::size_t>(c.member)];
  }

  Mat u(d, d);
  for (int i = 0; i < n; ++i) {
    int col = offsets[static_cast<std::size_t>(i)];
    for (int k : assigned[static_cast<std::size_t>(i)]) u.col(col++) = s.eigenvectors.col(k);
  }
  return u;
}

// Descending eigenvalues of each weighted member, with prefix sums, for the
// Ky Fan bound Σ_i (top-r_i eigenvalue sum of W_i) on any projector family.
struct MemberSpectra {
  std::vector<std::vector<double>> prefix;  // prefix[i][r] = top-r sum for W_i

  double bound(const std::vector<int>& ranks) const {
    double b = 0.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      const std::size_t r =
          std::min(static_cast<std::size_t>(ranks[i]), prefix[i].size() - 1);
      b += prefix[i][r];
    }
    return b;
  }
};

std::vector<int> lsm_seeded_ranks(const Ensemble& active, const std::vector<int>& caps,
                                  int target) {
  const Povm lsm = lsm_povm(active);
  const int n = active.size();
  std::vector<std::vector<double>> eigs(static_cast<std::size_t>(n));
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    RVec lam = linalg::eigh(lsm.effects[static_cast<std::size_t>(i)]).eigenvalues;
    std::vector<double> desc(lam.data(), lam.data() + lam.size());
    std::sort(desc.begin(), desc.end(), std::greater<double>());
    int count = 0;
    for (double v : desc) {
      if (v >= 0.5) ++count;
    }
    r[static_cast<std::size_t>(i)] = std::min(count, caps[static_cast<std::size_t>(i)]);
    eigs[static_cast<std::size_t>(i)] = std::move(desc);
  }
  int sum = std::accumulate(r.begin(), r.end(), 0);
  while (sum > target) {
    int pick = -1;
    double worst = 2.0;
    for (int i = 0; i < n; ++i) {
      if (r[static_cast<std::size_t>(i)] == 0) continue;
      const double kept = eigs[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(r[static_cast<std::size_t>(i)] - 1)];
      if (kept < worst) {
        worst = kept;
        pick = i;
      }
    }
    --r[static_cast<std::size_t>(pick)];
    --sum;
  }
  while (sum < target) {
    int pick = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      if (r[static_cast<std::size_t>(i)] >= caps[static_cast<std::size_t>(i)]) continue;
      const std::size_t next = static_cast<std::size_t>(r[static_cast<std::size_t>(i)]);
      const double gain =
          next < eigs[static_cast<std::size_t>(i)].size() ? eigs[static_cast<std::size_t>(i)][next] : 0.0;
      if (gain > best) {
        best = gain;
        pick = i;
      }
    }
    ++r[static_cast<std::size_t>(pick)];
    ++sum;
  }
  return r;
}

}  // namespace

Povm::Povm(std::vector<Mat> e) : effects(std::move(e)) {
  if (effects.empty()) throw ValidationError("POVM has no effects");
  const Eigen::Index d = effects.front().rows();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& m : effects) {
    if (m.rows() != d || m.cols() != d) {
      throw DimensionMismatchError("POVM effects differ in shape");
    }
    if (linalg::hermiticity_deviation(m) > kEffectPsdTol) {
      throw ValidationError("POVM effect is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(linalg::symmetrized(m),
                                              Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kEffectPsdTol) {
      throw NotPsdError("POVM effect eigenvalue " +
                        std::to_string(solver.eigenvalues().minCoeff()));
    }
    sum += m;
  }
  const double defect = (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > kPovmSumTol) {
    throw ValidationError("POVM completeness defect " + std::to_string(defect));
  }
}

double success_probability(const Ensemble& e, const Povm& m) {
  if (m.size() != e.size()) {
    throw CountMismatchError("POVM has " + std::to_string(m.size()) + " effects for " +
                             std::to_string(e.size()) + " members");
  }
  if (m.dim() != e.dim()) {
    throw DimensionMismatchError("POVM dim " + std::to_string(m.dim()) +
                                 " vs ensemble dim " + std::to_string(e.dim()));
  }
  double s = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    const Ensemble::Member& mem = e.members[static_cast<std::size_t>(i)];
    s += mem.prior *
         (m.effects[static_cast<std::size_t>(i)] * mem.state.mat()).trace().real();
  }
  return clamp01(s);
}

DiscriminationResult evaluate(const Ensemble& e, Povm m) {
  const double s = success_probability(e, m);
  return {s, 1.0 - s, std::move(m), Method::Evaluated, {}};
}

DiscriminationResult helstrom(const Ensemble& e) {
  if (e.size() != 2) {
    throw WrongMemberCountError("helstrom needs exactly 2 members, got " +
                                std::to_string(e.size()));
  }
  const Ensemble::Member& a = e.members[0];
  const Ensemble::Member& b = e.members[1];
  BinarySplit split = binary_split(a.prior * a.state.mat(), b.prior * b.state.mat(),
                                   a.prior + b.prior);
  Povm m({std::move(split.pi_first), std::move(split.pi_second)});
  return {split.success, 1.0 - split.success, std::move(m), Method::HelstromExact, {}};
}

Povm lsm_povm(const Ensemble& e) {
  const int d = e.dim();
  Mat rho_out = Mat::Zero(d, d);
  for (const Ensemble::Member& m : e.members) rho_out += m.prior * m.state.mat();
  const Mat s = linalg::psd_inv_sqrt(rho_out);
  std::vector<Mat> effects;
  effects.reserve(e.members.size());
  for (const Ensemble::Member& m : e.members) {
    effects.push_back(linalg::symmetrized(m.prior * s * m.state.mat() * s));
  }
  Mat residual = Mat::Identity(d, d);
  for (const Mat& m : effects) residual -= m;
  effects[0] += linalg::symmetrized(residual);
  return Povm(std::move(effects));
}

double lsm_error(const Ensemble& e) { return 1.0 - success_probability(e, lsm_povm(e)); }

DiscriminationResult lsm_result(const Ensemble& e) {
  Povm m = lsm_povm(e);
  const double s = success_probability(e, m);
  return {s, 1.0 - s, std::move(m), Method::Lsm, {}};
}

DiscriminationResult optimal_vn(const Ensemble& e, int joint_dim, const VnOptions& opts) {
  if (e.size() < 2) {
    throw WrongMemberCountError("optimal_vn needs at least 2 members, got " +
                                std::to_string(e.size()));
  }
  if (e.dim() != joint_dim) {
    throw DimensionMismatchError("joint_dim " + std::to_string(joint_dim) +
                                 " vs ensemble dim " + std::to_string(e.dim()));
  }
  const int d = joint_dim;
  const int restarts = std::max(1, opts.restarts);

  std::vector<int> active;
  for (int i = 0; i < e.size(); ++i) {
    if (e.members[static_cast<std::size_t>(i)].prior >= kZeroPrior) active.push_back(i);
  }
  const int n = static_cast<int>(active.size());
  std::vector<Mat> effects(e.members.size(), Mat::Zero(d, d));

  if (n == 1) {
    effects[static_cast<std::size_t>(active[0])] = Mat::Identity(d, d);
    const double s = clamp01(e.members[static_cast<std::size_t>(active[0])].prior);
    return {s, 1.0 - s, Povm(std::move(effects)), Method::HelstromExact, {}};
  }
  if (n == 2) {
    const Ensemble::Member& a = e.members[static_cast<std::size_t>(active[0])];
    const Ensemble::Member& b = e.members[static_cast<std::size_t>(active[1])];
    BinarySplit split = binary_split(a.prior * a.state.mat(), b.prior * b.state.mat(),
                                     a.prior + b.prior);
    effects[static_cast<std::size_t>(active[0])] = std::move(split.pi_first);
    effects[static_cast<std::size_t>(active[1])] = std::move(split.pi_second);
    return {split.success, 1.0 - split.success, Povm(std::move(effects)),
            Method::HelstromExact, {}};
  }

  // Weighted members and their numerical ranks; the optimum is attained with
  // projector ranks capped by these (excess dimensions can always be moved to
  // another effect without changing the value), so the composition search runs
  // over capped ranks plus a value-neutral padding block.
  std::vector<Mat> w(static_cast<std::size_t>(n));
  std::vector<int> caps(static_cast<std::size_t>(n));
  MemberSpectra spectra;
  spectra.prefix.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Ensemble::Member& m = e.members[static_cast<std::size_t>(active[i])];
    w[static_cast<std::size_t>(i)] = m.prior * m.state.mat();
    RVec lam = linalg::eigh(w[static_cast<std::size_t>(i)]).eigenvalues;
    std::vector<double> desc(lam.data(), lam.data() + lam.size());
    std::sort(desc.begin(), desc.end(), std::greater<double>());
    int rank = 0;
    for (double v : desc) {
      if (v > linalg::kSupportTieTol) ++rank;
    }
    caps[static_cast<std::size_t>(i)] = rank;
    std::vector<double> prefix(static_cast<std::size_t>(d) + 1, 0.0);
    for (int k = 0; k < d; ++k) {
      prefix[static_cast<std::size_t>(k) + 1] =
          prefix[static_cast<std::size_t>(k)] + std::max(0.0, desc[static_cast<std::size_t>(k)]);
    }
    spectra.prefix[static_cast<std::size_t>(i)] = std::move(prefix);
  }
  const int cap_sum = std::accumulate(caps.begin(), caps.end(), 0);
  const int target = std::min(d, cap_sum);
  const int pad = d - target;
  int pad_member = 0;
  for (int i = 1; i < n; ++i) {
    if (w[static_cast<std::size_t>(i)].trace().real() >
        w[static_cast<std::size_t>(pad_member)].trace().real()) {
      pad_member = i;
    }
  }

  std::vector<std::vector<int>> comps;
  if (d <= 8) {
    enumerate_capped(caps, target, comps);
  } else {
    comps.push_back(lsm_seeded_ranks(
        Ensemble([&] {
          std::vector<Ensemble::Member> active_members;
          double mass = 0.0;
          for (int i : active) mass += e.members[static_cast<std::size_t>(i)].prior;
          for (int i : active) {
            const Ensemble::Member& m = e.members[static_cast<std::size_t>(i)];
            active_members.push_back({m.prior / mass, m.state});
          }
          return active_members;
        }()),
        caps, target));
  }

  struct Scored {
    double bound;
    std::size_t index;
  };
  std::vector<Scored> order(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<int> ranks = comps[c];
    ranks[static_cast<std::size_t>(pad_member)] += pad;
    order[c] = {spectra.bound(ranks), c};
  }
  std::sort(order.begin(), order.end(), [](const Scored& a, const Scored& b) {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.index < b.index;
  });

  const Rng base(opts.seed);
  double best_value = -1.0;
  Mat best_u;
  std::vector<int> best_ranks;
  int best_restart = -1;
  bool best_converged = false;

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    if (order[oi].bound <= best_value + 1e-12) break;  // sorted: nothing below can win
    std::vector<int> ranks = comps[order[oi].index];
    ranks[static_cast<std::size_t>(pad_member)] += pad;
    std::vector<int> offsets(static_cast<std::size_t>(n), 0);
    for (int i = 1; i < n; ++i) {
      offsets[static_cast<std::size_t>(i)] =
          offsets[static_cast<std::size_t>(i) - 1] + ranks[static_cast<std::size_t>(i) - 1];
    }
    // Compositions far down the bound ordering get a reduced budget; the
    // leaders get the full restart count.
    const int comp_restarts = oi < 16 ? restarts : std::min(restarts, 3);
    const std::uint64_t key = composition_key(comps[order[oi].index], d + 1);

    std::vector<AscentOutcome> outcomes(static_cast<std::size_t>(comp_restarts));
    par::for_each_index(
        comp_restarts,
        [&](int r) {
          Mat u0 = r == 0 ? warm_start(w, offsets, ranks, d)
                          : random_unitary(d, base.fork(key).fork(
                                                  static_cast<std::uint64_t>(r)).seed());
          outcomes[static_cast<std::size_t>(r)] =
              geodesic_ascent(w, offsets, ranks, std::move(u0), opts);
        },
        opts.mode);

    for (int r = 0; r < comp_restarts; ++r) {
      const AscentOutcome& oc = outcomes[static_cast<std::size_t>(r)];
      if (oc.value > best_value) {
        best_value = oc.value;
        best_u = oc.u;
        best_ranks = ranks;
        best_restart = r;
        best_converged = oc.converged;
      }
    }
  }

  int offset = 0;
  for (int i = 0; i < n; ++i) {
    const int r = best_ranks[static_cast<std::size_t>(i)];
    if (r > 0) {
      const auto ub = best_u.middleCols(offset, r);
      effects[static_cast<std::size_t>(active[i])] = ub * ub.adjoint();
    }
    offset += r;
  }
  const double s = clamp01(best_value);
  return {s, 1.0 - s, Povm(std::move(effects)), Method::VnOptimized,
          {restarts, best_restart, best_converged}};
}

}  // namespace qpc
