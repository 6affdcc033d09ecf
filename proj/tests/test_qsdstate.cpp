#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <qpc/errors.hpp>
#include <qpc/partialcoh.hpp>
#include <qpc/qsd.hpp>
#include <qpc/qsdstate.hpp>
#include <qpc/rng.hpp>
#include <qpc/states.hpp>

#include "oracles.hpp"

using namespace qpc;

namespace {

Ensemble make(std::vector<double> priors, std::vector<DensityMatrix> states) {
  std::vector<Ensemble::Member> m;
  for (std::size_t i = 0; i < priors.size(); ++i) m.push_back({priors[i], states[i]});
  return Ensemble(m);
}

}  // namespace

TEST_CASE("orthogonal pure members embed as a diagonal product-like state") {
  const Ensemble e = make({0.3, 0.7}, {testing::pure_state(testing::ket(2, 0)),
                                       testing::pure_state(testing::ket(2, 1))});
  const BipartiteState qsd = build_qsd_state(e);
  CHECK(qsd.n_a == 2);
  CHECK(qsd.n_b == 2);
  Mat expected = Mat::Zero(4, 4);
  expected(0, 0) = 0.3;   // |0><0| block for member 1
  expected(3, 3) = 0.7;   // |1><1| block for member 2
  CHECK((qsd.state.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);
  // Perfectly distinguishable members leave nothing to erase.
  CHECK(fidelity_partial_coherence(qsd).value <= 1e-9);
}

TEST_CASE("the embedded state is a valid density matrix with matching marginals") {
  Rng rng(7);
  for (int t = 0; t < 8; ++t) {
    const int n = 2 + t % 3;
    const int m = 2 + t % 2;
    std::vector<Ensemble::Member> members;
    double rest = 1.0;
    for (int i = 0; i < n; ++i) {
      const double p = (i == n - 1) ? rest : rest * (0.3 + 0.4 * rng.uniform());
      if (i != n - 1) rest -= p;
      members.push_back({p, random_density(m, 1 + (int)rng.below(m), rng.next_u64())});
    }
    const Ensemble e(members);
    const BipartiteState qsd = build_qsd_state(e);  // ctor validates psd/trace
    // Diagonal a-blocks carry the priors.
    for (int i = 0; i < n; ++i) {
      const double block_trace =
          qsd.state.mat().block(i * m, i * m, m, m).trace().real();
      CHECK_NEAR(block_trace, e.members[i].prior, 1e-9);
    }
  }
}

TEST_CASE("roundtrip recovers priors and member spectra") {
  Rng rng(11);
  for (int n : {2, 3}) {
    std::vector<Ensemble::Member> members;
    double rest = 1.0;
    for (int i = 0; i < n; ++i) {
      const double p = (i == n - 1) ? rest : rest * 0.5;
      if (i != n - 1) rest -= p;
      members.push_back({p, random_density(3, 2, rng.next_u64())});
    }
    const RoundtripReport rep = qsd_state_roundtrip(Ensemble(members));
    CHECK(rep.max_prior_error <= 1e-9);
    CHECK(rep.max_spectrum_error <= 1e-8);
    for (int i = 0; i < n; ++i)
      CHECK_NEAR(rep.recovered_priors[i], members[i].prior, 1e-9);
  }
}

TEST_CASE("a zero-prior member keeps its slot but contributes nothing") {
  const Ensemble e = make({0.0, 1.0}, {testing::pure_state(testing::plus()),
                                       testing::pure_state(testing::ket(2, 0))});
  const BipartiteState qsd = build_qsd_state(e);
  CHECK(qsd.state.mat().block(0, 0, 2, 2).cwiseAbs().maxCoeff() < 1e-12);
  const RoundtripReport rep = qsd_state_roundtrip(e);
  CHECK(rep.recovered_priors[0] == 0.0);
  CHECK_NEAR(rep.recovered_priors[1], 1.0, 1e-12);
}

TEST_CASE("bound check certifies equality for binary independent ensembles") {
  Rng rng(13);
  for (int t = 0; t < 6; ++t) {
    const Ensemble e = make(
        {0.35, 0.65},
        {testing::pure_state(random_pure(3, rng.next_u64())),
         testing::pure_state(random_pure(3, rng.next_u64()))});
    const BoundReport rep = discrimination_bound_check(e);
    CHECK(rep.linearly_independent);
    CHECK(rep.bound_holds);
    CHECK(rep.equality);
    CHECK(std::abs(rep.fidelity_pc - rep.reference_error) <= 1e-7);
    CHECK(rep.lsm_identity_gap <= 1e-8);
  }
}

TEST_CASE("bound check still holds without linear independence") {
  const DensityMatrix same = random_density(2, 2, 17);
  const Ensemble e = make({0.5, 0.5}, {same, same});
  const BoundReport rep = discrimination_bound_check(e);
  CHECK_FALSE(rep.linearly_independent);
  CHECK(rep.bound_holds);
  CHECK_FALSE(rep.equality);  // the equality flag requires independence
  // Identical members cannot be told apart better than the best prior.
  CHECK_NEAR(rep.reference_error, 0.5, 1e-9);
}

TEST_CASE("the affinity measure of the embedding equals the LSM error") {
  Rng rng(19);
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 3;
    std::vector<Ensemble::Member> members;
    double rest = 1.0;
    for (int i = 0; i < n; ++i) {
      const double p = (i == n - 1) ? rest : rest * (0.3 + 0.3 * rng.uniform());
      if (i != n - 1) rest -= p;
      members.push_back({p, random_density(2 + t % 2, 1 + (int)rng.below(2 + t % 2),
                                           rng.next_u64())});
    }
    const Ensemble e(members);
    const BoundReport rep = discrimination_bound_check(e);
    CHECK_NEAR(rep.affinity_pc, rep.lsm_error_value, 1e-8);
    CHECK(rep.lsm_identity_gap <= 1e-8);
  }
}
