#include <qpc/verify.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <qpc/cli.hpp>
#include <qpc/correlations.hpp>
#include <qpc/errors.hpp>
#include <qpc/io.hpp>
#include <qpc/linalg.hpp>
#include <qpc/metrics.hpp>
#include <qpc/partialcoh.hpp>
#include <qpc/qsd.hpp>
#include <qpc/qsdstate.hpp>
#include <qpc/rng.hpp>
#include <qpc/states.hpp>

namespace qpc::verify {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

struct TrialResult {
  int checks = 0;
  int fails = 0;
  std::string detail;
};

// Collects assertions for one trial; keeps the first few failure messages.
struct Checker {
  TrialResult r;

  void expect(bool cond, const std::string& what) {
    ++r.checks;
    if (cond) return;
    ++r.fails;
    if (r.fails <= 3) {
      if (!r.detail.empty()) r.detail += "; ";
      r.detail += what;
    }
  }
  void le(double a, double b, double slack, const std::string& what) {
    expect(a <= b + slack, what + ": " + fmt(a) + " > " + fmt(b) + " + " + fmt(slack));
  }
  void ge(double a, double b, double slack, const std::string& what) {
    expect(a >= b - slack, what + ": " + fmt(a) + " < " + fmt(b) + " - " + fmt(slack));
  }
  void close(double got, double want, double tol, const std::string& what) {
    expect(std::abs(got - want) <= tol,
           what + ": |" + fmt(got) + " - " + fmt(want) + "| > " + fmt(tol));
  }
};

// ---------------------------------------------------------------------------
// shared generators
// ---------------------------------------------------------------------------

BipartiteState rand_bipartite(int n_a, int n_b, Rng& rng, int rank, bool random_basis) {
  const int d = n_a * n_b;
  DensityMatrix rho = random_density(d, rank, rng.next_u64());
  if (!random_basis) return BipartiteState(n_a, n_b, std::move(rho));
  return BipartiteState(n_a, n_b, std::move(rho), random_unitary(n_a, rng.next_u64()));
}

Ensemble binary_ensemble(int dim, int rank1, int rank2, double eta1, Rng& rng) {
  std::vector<Ensemble::Member> members;
  members.push_back({eta1, random_density(dim, rank1, rng.next_u64())});
  members.push_back({1.0 - eta1, random_density(dim, rank2, rng.next_u64())});
  return Ensemble(std::move(members));
}

// ---------------------------------------------------------------------------
// independent oracles
// ---------------------------------------------------------------------------

// Best success probability of a binary ensemble over two-outcome projective
// measurements (P, I-P), found by orthogonal subspace iteration on the
// shifted Helstrom operator from random starts — deliberately a different
// algorithm from the library's geodesic optimizer.
double two_outcome_oracle(const Ensemble& e, int restarts, Rng& rng) {
  const int d = e.dim();
  const Mat w1 = e.members[0].prior * e.members[0].state.mat();
  const Mat w2 = e.members[1].prior * e.members[1].state.mat();
  const Mat lambda = w1 - w2;
  const double t2 = w2.trace().real();
  const Mat shifted = lambda + (lambda.norm() + 1.0) * Mat::Identity(d, d);

  // rank-0 / rank-d pairs (trivial guessing) are admissible two-outcome pairs
  double best = std::max(w1.trace().real(), t2);
  for (int start = 0; start < restarts; ++start) {
    const int r = 1 + start % (d - 1);
    Mat u = random_unitary(d, rng.next_u64()).leftCols(r);
    double prev = -1.0;
    int stall = 0;
    for (int it = 0; it < 5000; ++it) {
      const Mat y = shifted * u;
      Eigen::HouseholderQR<Mat> qr(y);
      u = qr.householderQ() * Mat::Identity(d, r);
      const double val = (u.adjoint() * lambda * u).trace().real() + t2;
      if (val <= prev + 1e-13) {
        if (++stall >= 10) break;
      } else {
        stall = 0;
        prev = val;
      }
    }
    best = std::max(best, prev);
  }
  return best;
}

// Dense scan over qubit two-outcome projective measurements: Haar samples
// followed by a steepest-ascent polish on the Bloch sphere.
double qubit_scan_oracle(const Ensemble& e, int samples, Rng& rng) {
  const Mat w1 = e.members[0].prior * e.members[0].state.mat();
  const Mat w2 = e.members[1].prior * e.members[1].state.mat();
  const Mat lambda = w1 - w2;
  const double base = 0.5 * lambda.trace().real() + w2.trace().real();

  // Bloch vector of the Helstrom operator: f(n) = base + n·v / 2.
  const Eigen::Vector3d v(2.0 * lambda(0, 1).real(), -2.0 * lambda(0, 1).imag(),
                          (lambda(0, 0) - lambda(1, 1)).real());

  double best = std::max(w1.trace().real(), w2.trace().real());
  Eigen::Vector3d best_n = Eigen::Vector3d::UnitZ();
  for (int k = 0; k < samples; ++k) {
    const Mat u = random_unitary(2, rng.next_u64());
    const Mat p = u.col(0) * u.col(0).adjoint();
    const Eigen::Vector3d n(2.0 * p(0, 1).real(), -2.0 * p(0, 1).imag(),
                            (p(0, 0) - p(1, 1)).real());
    const double f = base + 0.5 * n.dot(v);
    if (f > best) {
      best = f;
      best_n = n;
    }
  }
  // local refinement from the best sample
  Eigen::Vector3d n = best_n;
  for (int it = 0; it < 200; ++it) {
    const Eigen::Vector3d cand = (n + 0.5 * v).normalized();
    const double f = base + 0.5 * cand.dot(v);
    if (f <= best + 1e-15) break;
    best = f;
    n = cand;
  }
  return best;
}

// ---------------------------------------------------------------------------
// criterion 1: metric axioms
// ---------------------------------------------------------------------------

TrialResult suite1(int t, std::uint64_t seed) {
  static constexpr int kDims[4] = {2, 3, 4, 6};
  const int d = kDims[t % 4];
  Rng rng(seed);
  Checker c;

  const DensityMatrix rho = random_density(d, 1 + rng.below(d), rng.next_u64());
  const DensityMatrix sig = random_density(d, 1 + rng.below(d), rng.next_u64());

  const double a = affinity(rho, sig);
  const double f = fidelity(rho, sig);
  c.ge(a, 0.0, 0.0, "affinity >= 0");
  c.le(a, f, 1e-9, "affinity <= fidelity");
  c.le(f, 1.0, 0.0, "fidelity <= 1");

  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    c.ge(similarity(rho, rho, kind), 1.0, 1e-9, "X(rho,rho) ~ 1");
    c.le(distance(rho, rho, kind), 0.0, 1e-9, "d_X(rho,rho) ~ 0");
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 2: strong contractibility under subselection
// ---------------------------------------------------------------------------

TrialResult suite2(int t, std::uint64_t seed) {
  static constexpr int kDims[4] = {2, 3, 4, 6};
  static constexpr struct { int n_a, n_b; } kSplits[3] = {{2, 2}, {2, 3}, {3, 2}};
  Rng rng(seed);
  Checker c;

  const int variant = t % 4;
  int d;
  KrausChannel phi = [&]() -> KrausChannel {
    switch (variant) {
      case 0:
        d = kDims[(t / 4) % 4];
        return random_channel(d, 4, rng.next_u64());
      case 1: {
        const auto s = kSplits[(t / 4) % 3];
        d = s.n_a * s.n_b;
        return luders_channel(s.n_a, s.n_b);
      }
      case 2: {
        const auto s = kSplits[(t / 4) % 3];
        d = s.n_a * s.n_b;
        return random_partial_incoherent_channel(s.n_a, s.n_b, 3, rng.next_u64());
      }
      default:
        d = kDims[(t / 4) % 4];
        return random_channel(d, 2, rng.next_u64());
    }
  }();

  const DensityMatrix rho = random_density(d, 1 + rng.below(d), rng.next_u64());
  const DensityMatrix sig = random_density(d, d, rng.next_u64());

  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    c.ge(contractibility_slack(rho, sig, phi, kind, WeightSide::Rho), 0.0, 1e-8,
         "slack (rho weights)");
    c.ge(contractibility_slack(rho, sig, phi, kind, WeightSide::Sigma), 0.0, 1e-8,
         "slack (sigma weights)");
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 3: similarity properties P1-P5
// ---------------------------------------------------------------------------

TrialResult suite3(int t, std::uint64_t seed) {
  static constexpr int kDims[3] = {2, 3, 4};
  const int d = kDims[t % 3];
  Rng rng(seed);
  Checker c;

  const DensityMatrix rho = random_density(d, 1 + rng.below(d), rng.next_u64());
  const DensityMatrix sig = random_density(d, 1 + rng.below(d), rng.next_u64());
  const KrausChannel phi = random_channel(d, 2 + t % 3, rng.next_u64());

  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    const double x = similarity(rho, sig, kind);

    // P1: range, identity, and strict decrease on distinct-support pairs.
    c.expect(x >= 0.0 && x <= 1.0, "X in [0,1]");
    c.ge(similarity(rho, rho, kind), 1.0, 1e-9, "X(rho,rho) ~ 1");
    {
      const Mat u = random_unitary(d, rng.next_u64());
      const double theta = 0.1 + rng.uniform() * (M_PI / 2.0 - 0.1);
      const Vec va = u.col(0);
      const Vec vb = std::cos(theta) * u.col(0) + std::sin(theta) * u.col(1);
      const DensityMatrix pa(va * va.adjoint());
      const DensityMatrix pb(vb * vb.adjoint());
      c.le(similarity(pa, pb, kind), 1.0 - 1e-6, 0.0, "X < 1 on distinct supports");
    }

    // P2: branch scaling X(K rho K†, K sig K†) = sqrt(pq) X(rho_n, sig_n).
    {
      const std::vector<Branch> br = subselect(rho, phi);
      const std::vector<Branch> bs = subselect(sig, phi);
      for (std::size_t n = 0; n < phi.operators.size(); ++n) {
        if (!br[n].state || !bs[n].state) continue;
        const Mat& k = phi.operators[n];
        const double lhs =
            similarity_raw(k * rho.mat() * k.adjoint(), k * sig.mat() * k.adjoint(), kind);
        const double rhs = std::sqrt(br[n].probability * bs[n].probability) *
                           similarity(*br[n].state, *bs[n].state, kind);
        c.close(lhs, rhs, 1e-8, "P2 branch scaling");
      }
    }

    // P3: monotonicity under CPTP maps.
    c.ge(similarity(apply_channel(rho, phi), apply_channel(sig, phi), kind), x, 1e-8,
         "P3 channel monotonicity");

    // P4: additivity over a pinching by mutually orthogonal projectors.
    {
      const Mat v = random_unitary(d, rng.next_u64());
      const int cut = 1 + rng.below(d - 1);
      std::vector<Mat> projectors;
      Mat e1 = Mat::Zero(d, d);
      e1.topLeftCorner(cut, cut).setIdentity();
      projectors.push_back(v * e1 * v.adjoint());
      projectors.push_back(v * (Mat::Identity(d, d) - e1) * v.adjoint());

      Mat pr = Mat::Zero(d, d), ps = Mat::Zero(d, d);
      double sum = 0.0;
      for (const Mat& p : projectors) {
        const Mat blr = p * rho.mat() * p;
        const Mat bls = p * sig.mat() * p;
        pr += blr;
        ps += bls;
        sum += similarity_raw(blr, bls, kind);
      }
      c.close(similarity(DensityMatrix(pr), DensityMatrix(ps), kind), sum, 1e-8,
              "P4 block additivity");
    }

    // P5: subselection superadditivity.
    {
      double sum = 0.0;
      for (const Mat& k : phi.operators) {
        sum += similarity_raw(k * rho.mat() * k.adjoint(), k * sig.mat() * k.adjoint(), kind);
      }
      c.ge(sum, x, 1e-8, "P5 branch sum >= X");
    }
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 4: fidelity partial coherence vs direct measurement search
// ---------------------------------------------------------------------------

TrialResult suite4(int t, std::uint64_t seed) {
  const int n_b = 2 + t % 2;
  Rng rng(seed);
  Checker c;

  const BipartiteState rho = rand_bipartite(2, n_b, rng, 2 * n_b, t % 2 == 1);
  const CoherenceReport rep = fidelity_partial_coherence(rho);
  const Ensemble e = qsd_ensemble_of(rho);

  c.close(rep.value, helstrom(e).error_prob, 1e-9, "C_F vs helstrom error");
  c.close(rep.value, 1.0 - two_outcome_oracle(e, 50, rng), 1e-6,
          "C_F vs direct projector search");
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 5: affinity closed form is the minimum
// ---------------------------------------------------------------------------

TrialResult suite5(int t, std::uint64_t seed) {
  static constexpr struct { int n_a, n_b; } kSplits[3] = {{2, 2}, {2, 3}, {3, 2}};
  const auto s = kSplits[t % 3];
  const int d = s.n_a * s.n_b;
  Rng rng(seed);
  Checker c;

  const bool rotated = t % 5 == 0;
  const int rank = t % 3 == 1 ? d - 1 : d;
  const BipartiteState rho = rand_bipartite(s.n_a, s.n_b, rng, rank, rotated);
  const CoherenceReport rep = affinity_partial_coherence(rho);
  const Mat joint = linalg::kron(rho.basis_a, Mat::Identity(s.n_b, s.n_b));

  // 1000 sampled partial-incoherent competitors never beat the reported value.
  double min_d = 2.0;
  for (int k = 0; k < 1000; ++k) {
    const BipartiteState pi = random_partial_incoherent_state(s.n_a, s.n_b, rng.next_u64());
    const Mat sigma = rotated ? Mat(joint * pi.state.mat() * joint.adjoint())
                              : pi.state.mat();
    min_d = std::min(min_d, distance(rho.state, DensityMatrix(sigma), Kind::Affinity));
  }
  c.le(rep.value, min_d, 1e-8, "C_A <= sampled d_A");

  // The reported minimizer attains the value and is admissible.
  c.close(distance(rho.state, rep.cpis, Kind::Affinity), rep.value, 1e-8,
          "d_A(rho, cpis) = C_A");
  c.expect(is_partial_incoherent(BipartiteState(s.n_a, s.n_b, rep.cpis, rho.basis_a), 1e-8),
           "cpis is partial incoherent");

  // Skew-information identity: C_A = sum_i [tr(rho Pi_i) - tr(sqrt(rho) Pi_i sqrt(rho) Pi_i)].
  // Evaluated in the reference frame so that a single square root serves both
  // sides; rank-deficient states make sqrt(rho) itself only sqrt(eps)-stable
  // across frames, which would otherwise swamp the identity.
  {
    const Mat rebased = joint.adjoint() * rho.state.mat() * joint;
    const Mat root = linalg::psd_sqrt(linalg::symmetrized(rebased));
    double total = 0.0;
    for (int i = 0; i < s.n_a; ++i) {
      Mat pi = Mat::Zero(d, d);
      pi.block(i * s.n_b, i * s.n_b, s.n_b, s.n_b) = Mat::Identity(s.n_b, s.n_b);
      total += (rebased * pi).trace().real() -
               (root * pi * root * pi).trace().real();
    }
    c.close(total, rep.value, 1e-9, "skew-information identity");
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 6: X-state closed form
// ---------------------------------------------------------------------------

TrialResult suite6(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  if (t == 0) {
    // a=b=c=d=1/4, x=y=1/8: value (1 - sqrt(3)/2)/2.
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 0.25;
    m(0, 3) = m(3, 0) = 0.125;
    m(1, 2) = m(2, 1) = 0.125;
    const BipartiteState spot(2, 2, DensityMatrix(m));
    c.close(xstate_fidelity_pc(spot).value, (1.0 - std::sqrt(3.0) / 2.0) / 2.0, 1e-9,
            "spot X-state value");
  }

  const int n = 2 + t % 3;
  const BipartiteState rho = random_xstate(n, rng.next_u64(), true);
  const double closed = xstate_fidelity_pc(rho).value;
  const double general = fidelity_partial_coherence(rho).value;
  c.close(closed, general, 1e-8, "closed form vs helstrom reduction");
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 7: QSD-state embedding
// ---------------------------------------------------------------------------

TrialResult suite7(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  if (t == 0) {
    // {|0>, |+>} with equal priors: error (1 - 1/sqrt(2))/2.
    Vec zero(2), plus(2);
    zero << 1.0, 0.0;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    std::vector<Ensemble::Member> members;
    members.push_back({0.5, DensityMatrix(zero * zero.adjoint())});
    members.push_back({0.5, DensityMatrix(plus * plus.adjoint())});
    const Ensemble e(std::move(members));
    const double expected = 0.5 * (1.0 - 1.0 / std::sqrt(2.0));
    c.close(helstrom(e).error_prob, expected, 1e-6, "benchmark helstrom error");
    c.close(fidelity_partial_coherence(build_qsd_state(e)).value, expected, 1e-6,
            "benchmark C_F of the embedded state");
  }

  const int m = 2 + t % 2;
  const int rank1 = 1, rank2 = 1 + (m > 2 ? t % 2 : 0);  // ranks sum <= m keeps independence
  const double eta1 = 0.2 + 0.6 * rng.uniform();
  const Ensemble e = binary_ensemble(m, rank1, rank2, eta1, rng);
  c.expect(is_linearly_independent(e, linalg::kSupportTieTol), "ensemble is independent");

  const BipartiteState qsd = build_qsd_state(e);  // constructor validates the state
  c.expect(qsd.n_a == 2 && qsd.n_b == m, "embedding dimensions");

  const RoundtripReport rt = qsd_state_roundtrip(e);
  c.le(rt.max_prior_error, 0.0, 1e-9, "prior recovery");
  c.le(rt.max_spectrum_error, 0.0, 1e-8, "member spectrum recovery");

  c.close(fidelity_partial_coherence(qsd).value, helstrom(e).error_prob, 1e-7,
          "C_F(qsd state) = optimal error");
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 8: LSM-affinity identities
// ---------------------------------------------------------------------------

TrialResult suite8(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  if (t % 3 == 0) {
    static constexpr struct { int n_a, n_b; } kSplits[4] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    const auto s = kSplits[(t / 3) % 4];
    const BipartiteState rho = rand_bipartite(s.n_a, s.n_b, rng, s.n_a * s.n_b, false);
    c.close(affinity_partial_coherence(rho).value, lsm_error(qsd_ensemble_of(rho)), 1e-8,
            "C_A(rho) = LSM error of its ensemble");
  } else {
    const int n = 2 + (t / 3) % 3;
    const int m = 2 + t % 2;
    std::vector<Ensemble::Member> members;
    double norm = 0.0;
    std::vector<double> priors;
    for (int i = 0; i < n; ++i) {
      priors.push_back(0.1 + rng.uniform());
      norm += priors.back();
    }
    for (int i = 0; i < n; ++i) {
      members.push_back({priors[static_cast<std::size_t>(i)] / norm,
                         random_density(m, 1 + rng.below(m), rng.next_u64())});
    }
    const Ensemble e(std::move(members));
    c.close(lsm_error(e), affinity_partial_coherence(build_qsd_state(e)).value, 1e-8,
            "LSM error = C_A of the embedded state");
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 9: Helstrom against a dense measurement scan
// ---------------------------------------------------------------------------

TrialResult suite9(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  const double eta1 = 0.1 + 0.8 * rng.uniform();
  const Ensemble e = binary_ensemble(2, 1 + t % 2, 1 + (t / 2) % 2, eta1, rng);
  const double opt = helstrom(e).success_prob;
  const double scan = qubit_scan_oracle(e, 5000, rng);
  c.close(opt, scan, 1e-4, "helstrom vs dense scan");
  c.ge(opt, scan, 1e-9, "helstrom is an upper bound for every measurement");
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 10: measure axioms C1-C4
// ---------------------------------------------------------------------------

TrialResult suite10(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    // Fidelity runs in the regime where the reduction is solved exactly.
    const int n_a = kind == Kind::Fidelity ? 2 : 2 + t % 2;
    const int n_b = kind == Kind::Fidelity ? 2 + t % 2 : (n_a == 2 ? 2 + t % 2 : 2);
    const int d = n_a * n_b;

    // C1 faithfulness.
    const BipartiteState pi_state = random_partial_incoherent_state(n_a, n_b, rng.next_u64());
    c.le(partial_coherence(pi_state, kind).value, 0.0, 1e-9, "C1 zero on free states");
    {
      const Mat u_a = random_unitary(n_a, rng.next_u64());
      const Mat u = linalg::kron(u_a, Mat::Identity(n_b, n_b));
      const BipartiteState coherent(
          n_a, n_b, DensityMatrix(u * pi_state.state.mat() * u.adjoint()));
      c.ge(partial_coherence(coherent, kind).value, 1e-6, 0.0,
           "C1 positive on locally rotated free states");
    }

    // C2 monotonicity under the free channel family.
    const BipartiteState rho = rand_bipartite(n_a, n_b, rng, d, false);
    const KrausChannel phi = random_partial_incoherent_channel(n_a, n_b, 3, rng.next_u64());
    const double base = partial_coherence(rho, kind).value;
    {
      const BipartiteState mapped(n_a, n_b, apply_channel(rho.state, phi));
      c.le(partial_coherence(mapped, kind).value, base, 1e-7, "C2 channel monotonicity");
    }

    // C3 strong monotonicity over subselected branches.
    {
      double avg = 0.0;
      for (const Branch& b : subselect(rho.state, phi)) {
        if (!b.state) continue;
        avg += b.probability *
               partial_coherence(BipartiteState(n_a, n_b, *b.state), kind).value;
      }
      c.le(avg, base, 1e-7, "C3 strong monotonicity");
    }

    // C4 convexity on three-component mixtures.
    {
      double w[3];
      double norm = 0.0;
      for (double& wi : w) {
        wi = 0.1 + rng.uniform();
        norm += wi;
      }
      Mat mix = Mat::Zero(d, d);
      double rhs = 0.0;
      for (double wi : w) {
        const BipartiteState part = rand_bipartite(n_a, n_b, rng, 1 + rng.below(d), false);
        mix += wi / norm * part.state.mat();
        rhs += wi / norm * partial_coherence(part, kind).value;
      }
      c.le(partial_coherence(BipartiteState(n_a, n_b, DensityMatrix(mix)), kind).value, rhs,
           1e-7, "C4 convexity");
    }
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 11: correlated coherence and discord bounds
// ---------------------------------------------------------------------------

TrialResult suite11(int t, std::uint64_t seed) {
  static constexpr struct { int n_a, n_b; } kSplits[3] = {{2, 2}, {2, 3}, {3, 3}};
  const auto s = kSplits[t % 3];
  const int d = s.n_a * s.n_b;
  Rng rng(seed);
  Checker c;

  PcOptions light;
  light.vn_restarts = 6;
  light.vn_max_iters = 1000;
  light.seed = rng.fork(101).seed();

  if (t == 0) {
    // Bell state: every quantity equals 1/2.
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const BipartiteState rho(2, 2, DensityMatrix(bell * bell.adjoint()));
    for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
      c.close(partial_coherence(rho, kind).value, 0.5, 1e-6, "Bell partial coherence");
      c.close(correlated_coherence(rho, kind, 8, 5).value, 0.5, 1e-6, "Bell cc");
      c.close(discord_estimate(rho, kind, 8, 5).value, 0.5, 1e-6, "Bell discord bound");
      c.close(pure_cc(bell, 2, 2, kind), 0.5, 1e-12, "Bell closed form");
    }
  }

  // gcc nonnegativity, both kinds.
  const BipartiteState rho = rand_bipartite(s.n_a, s.n_b, rng, 1 + rng.below(d), false);
  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    c.ge(gcc(rho, kind, light), 0.0, 1e-7, "gcc nonnegative");
  }

  // Affinity gcc vanishes on product states.
  {
    const Mat pa = random_density(s.n_a, s.n_a, rng.next_u64()).mat();
    const Mat pb = random_density(s.n_b, s.n_b, rng.next_u64()).mat();
    const BipartiteState prod(s.n_a, s.n_b, DensityMatrix(linalg::kron(pa, pb)));
    c.close(gcc(prod, Kind::Affinity), 0.0, 1e-8, "affinity gcc on product states");
  }

  // Optimizer vs pure-state closed form.
  if (t % 5 == 0) {
    const Vec psi = random_pure(d, rng.next_u64());
    const BipartiteState pure(s.n_a, s.n_b, DensityMatrix(psi * psi.adjoint()));
    for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
      const CcResult cc = correlated_coherence(pure, kind, 6, rng.fork(7).seed(), 1e-6, light);
      c.close(cc.value, pure_cc(psi, s.n_a, s.n_b, kind), 1e-5, "cc vs pure closed form");
    }
  }

  // Discord bound never exceeds cc (same seeds, shared search pool).
  if (t % 10 == 1) {
    const Kind kind = (t / 10) % 2 == 0 ? Kind::Fidelity : Kind::Affinity;
    const BipartiteState two(2, 2, random_density(4, 1 + rng.below(4), rng.next_u64()));
    const std::uint64_t s2 = rng.fork(13).seed();
    const double cc = correlated_coherence(two, kind, 8, s2, 1e-6, light).value;
    const double dis = discord_estimate(two, kind, 8, s2, 1e-6, light).value;
    c.le(dis, cc, 1e-12, "discord bound <= cc");
  }

  // Local-unitary invariance of cc.
  if (t % 10 == 5) {
    const int nb2 = 2 + t % 2;
    const BipartiteState base = rand_bipartite(2, nb2, rng, 2 * nb2, false);
    const Mat u = linalg::kron(random_unitary(2, rng.next_u64()),
                               random_unitary(nb2, rng.next_u64()));
    const BipartiteState moved(2, nb2,
                               DensityMatrix(u * base.state.mat() * u.adjoint()));
    for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
      const double v1 = correlated_coherence(base, kind, 6, rng.fork(17).seed()).value;
      const double v2 = correlated_coherence(moved, kind, 6, rng.fork(17).seed()).value;
      c.close(v1, v2, 1e-5, "cc local-unitary invariance");
    }
  }

  // Monotonicity of cc under channels on party b.
  if (t % 10 == 7) {
    const int nb2 = 2 + t % 2;
    const BipartiteState base = rand_bipartite(2, nb2, rng, 2 * nb2, false);
    const KrausChannel phi_b = random_channel(nb2, 2, rng.next_u64());
    std::vector<Mat> lifted;
    for (const Mat& k : phi_b.operators)
      lifted.push_back(linalg::kron(Mat::Identity(2, 2), k));
    const BipartiteState mapped(
        2, nb2, apply_channel(base.state, KrausChannel(std::move(lifted))));
    for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
      const double v1 = correlated_coherence(base, kind, 6, rng.fork(19).seed()).value;
      const double v2 = correlated_coherence(mapped, kind, 6, rng.fork(19).seed()).value;
      c.le(v2, v1, 1e-5, "cc monotone under b-side channels");
    }
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// criterion 12: CLI determinism and document round-trips
// ---------------------------------------------------------------------------

std::filesystem::path battery_dir(std::uint64_t seed) {
  std::ostringstream name;
  name << "qpc-verify-" << ::getpid() << "-" << std::hex << seed;
  return std::filesystem::temp_directory_path() / name.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

// Byte comparison of two runs with elapsed_ms removed.
void check_deterministic(Checker& c, const std::vector<std::string>& args) {
  const cli::RunOutput r1 = cli::run(args);
  const cli::RunOutput r2 = cli::run(args);
  std::string label;
  for (const std::string& a : args) label += a + " ";
  c.expect(r1.exit_code == 0 && r2.exit_code == 0,
           "command failed: " + label + "(exit " + std::to_string(r1.exit_code) + ")");
  if (r1.exit_code != 0) return;
  auto strip = [](const std::string& body) -> std::string {
    io::Json j = io::Json::parse(body);
    j.erase("elapsed_ms");
    return j.dump();
  };
  try {
    c.expect(strip(r1.out) == strip(r2.out), "stdout differs across runs: " + label);
  } catch (const std::exception& e) {
    c.expect(false, "unparsable ResultDocument from: " + label);
  }
  c.expect(r1.err == r2.err, "stderr differs across runs: " + label);
}

io::StateDocument random_document(Rng& rng, int which) {
  io::StateDocument doc;
  const auto entry = [&]() -> cplx {
    switch (rng.below(8)) {
      case 0: return {0.0, 0.0};
      case 1: return {-0.0, 0.5};
      case 2: return {1.0 / 3.0, -1.0 / 7.0};
      case 3: return {1e-300 * rng.gaussian(), 1e300 * rng.gaussian()};
      default: return rng.cgaussian();
    }
  };
  const auto fill = [&](int rows, int cols) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int col = 0; col < cols; ++col) m(r, col) = entry();
    return m;
  };
  switch (which % 5) {
    case 0: {
      const int d2 = 2 + rng.below(3);
      doc.kind = io::DocKind::Density;
      doc.dims = {d2};
      doc.matrix = fill(d2, d2);
      break;
    }
    case 1: {
      const int na = 2 + rng.below(2), nb = 2 + rng.below(2);
      doc.kind = io::DocKind::Bipartite;
      doc.dims = {na, nb};
      doc.matrix = fill(na * nb, na * nb);
      if (rng.below(2) == 0) doc.basis_a = fill(na, na);
      break;
    }
    case 2: {
      const int d2 = 2 + rng.below(2), n = 2 + rng.below(3);
      doc.kind = io::DocKind::Ensemble;
      doc.dims = {d2, n};
      for (int i = 0; i < n; ++i) {
        doc.matrices.push_back(fill(d2, d2));
        doc.priors.push_back(rng.uniform());
      }
      break;
    }
    case 3: {
      const int d2 = 2 + rng.below(2), k = 1 + rng.below(3);
      doc.kind = io::DocKind::Channel;
      doc.dims = {d2, k};
      for (int i = 0; i < k; ++i) doc.matrices.push_back(fill(d2, d2));
      break;
    }
    default: {
      const int d2 = 2 + rng.below(5);
      doc.kind = io::DocKind::Pure;
      doc.dims = {d2};
      doc.vector = fill(d2, 1).col(0);
      break;
    }
  }
  return doc;
}

TrialResult suite12(int t, std::uint64_t seed) {
  Rng rng(seed);
  Checker c;

  if (t == 0) {
    const std::filesystem::path dir = battery_dir(seed);
    std::filesystem::create_directories(dir);
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();
    const std::string bip = (dir / "bip.json").string();
    const std::string ens = (dir / "ens.json").string();
    const std::string xs = (dir / "xs.json").string();

    write_file(a, io::serialize_document(
                      io::document_from_density(random_density(3, 3, rng.next_u64()))));
    write_file(b, io::serialize_document(
                      io::document_from_density(random_density(3, 2, rng.next_u64()))));
    {
      BipartiteState st(2, 2, random_density(4, 4, rng.next_u64()),
                        random_unitary(2, rng.next_u64()));
      write_file(bip, io::serialize_document(io::document_from_bipartite(st)));
    }
    {
      Rng er = rng.fork(3);
      write_file(ens, io::serialize_document(
                          io::document_from_ensemble(binary_ensemble(2, 1, 1, 0.4, er))));
    }
    write_file(xs, io::serialize_document(io::document_from_bipartite(
                       random_xstate(2, rng.next_u64(), true))));

    for (const char* kind : {"fidelity", "affinity"}) {
      check_deterministic(c, {"distance", a, b, "--kind", kind});
      check_deterministic(c, {"coherence", a, "--kind", kind, "--restarts", "6", "--seed", "11"});
      check_deterministic(
          c, {"partial-coherence", bip, "--kind", kind, "--restarts", "6", "--seed", "11"});
    }
    check_deterministic(c, {"qsd", "helstrom", ens});
    check_deterministic(c, {"qsd", "lsm", ens});
    check_deterministic(c, {"qsd", "optimal-vn", ens, "--restarts", "6", "--seed", "3"});
    check_deterministic(c, {"qsd-state", "build", ens});
    check_deterministic(c, {"qsd-state", "check", ens, "--restarts", "6", "--seed", "3"});
    check_deterministic(c, {"xstate", xs});
    check_deterministic(c, {"gcc", bip, "--kind", "affinity"});
    check_deterministic(c, {"cc", bip, "--kind", "affinity", "--restarts", "4", "--seed", "9"});
    check_deterministic(c,
                        {"discord", bip, "--kind", "affinity", "--restarts", "4", "--seed", "9"});

    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
    return c.r;
  }

  // Serialization round-trip: parse(serialize(doc)) reserializes to the same bytes.
  const io::StateDocument doc = random_document(rng, t - 1);
  const std::string s1 = io::serialize_document(doc);
  try {
    const io::StateDocument back = io::parse_document(s1);
    const std::string s2 = io::serialize_document(back);
    c.expect(s1 == s2, "round-trip bytes differ for kind " +
                           std::string(io::doc_kind_name(doc.kind)));
  } catch (const std::exception& e) {
    c.expect(false, std::string("round-trip parse failed: ") + e.what());
  }
  return c.r;
}

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

struct SuiteSpec {
  int criterion;
  const char* name;
  int default_trials;
  TrialResult (*fn)(int, std::uint64_t);
};

constexpr SuiteSpec kSuites[] = {
    {1, "metric axioms", 800, suite1},
    {2, "strong contractibility", 200, suite2},
    {3, "similarity properties P1-P5", 100, suite3},
    {4, "fidelity reduction vs measurement search", 100, suite4},
    {5, "affinity closed form", 50, suite5},
    {6, "X-state closed form", 100, suite6},
    {7, "QSD-state embedding", 100, suite7},
    {8, "LSM-affinity identities", 300, suite8},
    {9, "helstrom vs dense scan", 50, suite9},
    {10, "measure axioms C1-C4", 100, suite10},
    {11, "correlated coherence and discord", 200, suite11},
    {12, "CLI determinism and round-trip", 201, suite12},
};

}  // namespace

int suite_count() { return static_cast<int>(std::size(kSuites)); }

const char* suite_name(int criterion) {
  for (const SuiteSpec& s : kSuites) {
    if (s.criterion == criterion) return s.name;
  }
  throw ValidationError("unknown criterion " + std::to_string(criterion));
}

std::vector<SuiteResult> run_verification(const VerifyOptions& opts, std::ostream& log) {
  std::vector<int> wanted = opts.suites;
  if (wanted.empty()) {
    for (const SuiteSpec& s : kSuites) wanted.push_back(s.criterion);
  }

  std::vector<SuiteResult> results;
  for (const int criterion : wanted) {
    if (criterion < 1 || criterion > suite_count())
      throw ValidationError("unknown criterion " + std::to_string(criterion));
    const SuiteSpec& spec = kSuites[criterion - 1];
    const int trials = opts.trials > 0 ? opts.trials : spec.default_trials;

    const auto started = std::chrono::steady_clock::now();
    std::vector<TrialResult> slots(static_cast<std::size_t>(trials));
    par::for_each_index(
        trials,
        [&](int t) {
          try {
            slots[static_cast<std::size_t>(t)] =
                spec.fn(t, opts.seed ^ static_cast<std::uint64_t>(t));
          } catch (const std::exception& e) {
            slots[static_cast<std::size_t>(t)] =
                TrialResult{1, 1, std::string("exception: ") + e.what()};
          }
        },
        opts.mode);

    SuiteResult res;
    res.criterion = criterion;
    res.name = spec.name;
    for (int t = 0; t < trials; ++t) {
      const TrialResult& tr = slots[static_cast<std::size_t>(t)];
      res.checks += tr.checks;
      res.failures += tr.fails;
      if (tr.fails > 0) res.failed.push_back({t, false, tr.detail});
    }
    res.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();

    log << "criterion " << criterion << " (" << spec.name << "): "
        << (res.passed() ? "PASS" : "FAIL") << " — " << res.checks << " checks, "
        << res.failures << " failures, " << fmt(res.elapsed_ms) << " ms\n";
    for (std::size_t i = 0; i < res.failed.size() && i < 10; ++i) {
      log << "  trial " << res.failed[i].trial << ": " << res.failed[i].detail << "\n";
    }
    if (res.failed.size() > 10) {
      log << "  ... " << (res.failed.size() - 10) << " more failing trials\n";
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace qpc::verify
