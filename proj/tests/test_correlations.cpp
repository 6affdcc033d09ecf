#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <qpc/correlations.hpp>
#include <qpc/errors.hpp>
#include <qpc/linalg.hpp>
#include <qpc/partialcoh.hpp>
#include <qpc/rng.hpp>
#include <qpc/states.hpp>

#include "oracles.hpp"

using namespace qpc;

namespace {

PcOptions light() {
  PcOptions opts;
  opts.vn_restarts = 8;
  opts.vn_max_iters = 1500;
  return opts;
}

Vec schmidt_vector(const RVec& lambda, int n) {
  Vec psi = Vec::Zero(n * n);
  for (int i = 0; i < n; ++i) psi(i * n + i) = std::sqrt(lambda(i));
  return psi;
}

}  // namespace

TEST_CASE("the Bell state carries half a unit of every correlation measure") {
  const BipartiteState bell(2, 2, testing::pure_state(testing::bell()));
  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    CHECK_NEAR(pure_cc(testing::bell(), 2, 2, kind), 0.5, 1e-12);
    CHECK_NEAR(correlated_coherence(bell, kind, 8, 5, 1e-6, light()).value, 0.5, 1e-6);
    CHECK_NEAR(discord_estimate(bell, kind, 8, 5, 1e-6, light()).value, 0.5, 1e-6);
  }
}

TEST_CASE("pure-state closed forms on products and maximal entanglement") {
  const Vec product = linalg::kron(Mat(testing::plus()), Mat(testing::ket(2, 0)));
  CHECK_NEAR(pure_cc(product, 2, 2, Kind::Fidelity), 0.0, 1e-12);
  CHECK_NEAR(pure_cc(product, 2, 2, Kind::Affinity), 0.0, 1e-12);

  RVec third(3);
  third << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  const Vec qutrit = schmidt_vector(third, 3);
  CHECK_NEAR(pure_cc(qutrit, 3, 3, Kind::Fidelity), 2.0 / 3.0, 1e-12);
  CHECK_NEAR(pure_cc(qutrit, 3, 3, Kind::Affinity), 2.0 / 3.0, 1e-12);
}

TEST_CASE("pure_cc rejects unnormalised vectors") {
  Vec big = 2.0 * testing::bell();
  CHECK_THROWS_AS(pure_cc(big, 2, 2, Kind::Fidelity), NotNormalizedError);
}

TEST_CASE("classical-on-a states have no correlated coherence or discord") {
  // Σ_i p_i |i><i| ⊗ σ_i in a rotated basis: classical on a by construction.
  Rng rng(23);
  const Mat u = random_unitary(2, rng.next_u64());
  Mat m = Mat::Zero(4, 4);
  m.block(0, 0, 2, 2) = 0.6 * random_density(2, 2, rng.next_u64()).mat();
  m.block(2, 2, 2, 2) = 0.4 * random_density(2, 1, rng.next_u64()).mat();
  const Mat lifted = linalg::kron(u, Mat::Identity(2, 2));
  const BipartiteState rho(2, 2, DensityMatrix(Mat(lifted * m * lifted.adjoint())));
  CHECK(correlated_coherence(rho, Kind::Affinity, 10, 7, 1e-7, light()).value <= 1e-8);
  CHECK(discord_estimate(rho, Kind::Affinity, 10, 7, 1e-7, light()).value <= 1e-8);
}

TEST_CASE("product states have vanishing discord and affinity gcc") {
  const Mat a = random_density(2, 2, 31).mat();
  const Mat b = random_density(3, 3, 32).mat();
  const BipartiteState prod(2, 3, DensityMatrix(linalg::kron(a, b)));
  CHECK(discord_estimate(prod, Kind::Affinity, 10, 9, 1e-7, light()).value <= 1e-7);
  CHECK(std::abs(gcc(prod, Kind::Affinity)) <= 1e-8);
}

TEST_CASE("gcc is nonnegative up to optimizer slack") {
  Rng rng(37);
  for (int t = 0; t < 6; ++t) {
    const BipartiteState rho(2, 2, random_density(4, 4, rng.next_u64()),
                             random_unitary(2, rng.next_u64()));
    CHECK(gcc(rho, Kind::Fidelity, light()) >= -1e-7);
    CHECK(gcc(rho, Kind::Affinity, light()) >= -1e-7);
  }
}

TEST_CASE("the exact flag tracks marginal degeneracy") {
  // Generic state: nondegenerate marginal, single eigenbasis.
  const BipartiteState generic(2, 2, random_density(4, 4, 41));
  const RVec marg_ev =
      linalg::eigh(linalg::partial_trace(generic.state.mat(), 2, 2, linalg::Party::A))
          .eigenvalues;
  if (marg_ev(1) - marg_ev(0) > 1e-6) {
    CHECK(correlated_coherence(generic, Kind::Affinity, 4, 3, 1e-6, light()).exact);
  }
  // Bell state: maximally mixed marginal, fully degenerate.
  const BipartiteState bell(2, 2, testing::pure_state(testing::bell()));
  CHECK_FALSE(correlated_coherence(bell, Kind::Affinity, 4, 3, 1e-6, light()).exact);
}

TEST_CASE("discord never exceeds correlated coherence with shared settings") {
  Rng rng(43);
  for (int t = 0; t < 4; ++t) {
    const BipartiteState rho(2, 2, random_density(4, 2 + (int)rng.below(3),
                                                  rng.next_u64()));
    const Kind kind = (t % 2 == 0) ? Kind::Fidelity : Kind::Affinity;
    const double cc = correlated_coherence(rho, kind, 6, 55, 1e-6, light()).value;
    const double disc = discord_estimate(rho, kind, 6, 55, 1e-6, light()).value;
    CHECK(disc <= cc + 1e-12);
  }
}

TEST_CASE("the affinity pure closed form is monotone under mixing of weights") {
  // Averaging permutations of the Schmidt weights makes them more uniform,
  // which can only increase 1 − Σ λ². Doubly-stochastic mixing is exactly the
  // majorization order, so the closed form must be monotone along it.
  Rng rng(47);
  const int n = 4;
  for (int t = 0; t < 100; ++t) {
    RVec lambda(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      lambda(i) = rng.uniform() + 1e-6;
      sum += lambda(i);
    }
    lambda /= sum;
    RVec mu = RVec::Zero(n);
    for (int p = 0; p < 3; ++p) {
      std::vector<int> perm{0, 1, 2, 3};
      for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      for (int i = 0; i < n; ++i) mu(i) += lambda(perm[i]) / 3.0;
    }
    const double before = pure_cc(schmidt_vector(lambda, n), n, n, Kind::Affinity);
    const double after = pure_cc(schmidt_vector(mu, n), n, n, Kind::Affinity);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("maximally mixed marginals collapse the cc-discord gap") {
  // For a purification with maximally mixed a-marginal every local basis is an
  // eigenbasis, so the two minimizations search the same set.
  const Vec psi = schmidt_vector((RVec(2) << 0.5, 0.5).finished(), 2);
  const BipartiteState rho(2, 2, testing::pure_state(psi));
  for (Kind kind : {Kind::Fidelity, Kind::Affinity}) {
    const double cc = correlated_coherence(rho, kind, 8, 21, 1e-6, light()).value;
    const double disc = discord_estimate(rho, kind, 8, 21, 1e-6, light()).value;
    CHECK(std::abs(cc - disc) <= 1e-5);
  }
}

TEST_CASE("correlated coherence is invariant under local unitaries") {
  const BipartiteState rho(2, 2, random_density(4, 4, 53));
  const Mat ua = random_unitary(2, 54);
  const Mat ub = random_unitary(2, 55);
  const Mat lifted = linalg::kron(ua, ub);
  const BipartiteState rotated(
      2, 2, DensityMatrix(Mat(lifted * rho.state.mat() * lifted.adjoint())));
  const double before = correlated_coherence(rho, Kind::Affinity, 10, 11, 1e-7,
                                             light()).value;
  const double after = correlated_coherence(rotated, Kind::Affinity, 10, 11, 1e-7,
                                            light()).value;
  CHECK_NEAR(before, after, 1e-5);
}

TEST_CASE("correlated coherence never grows under a channel on b") {
  const BipartiteState rho(2, 2, random_density(4, 4, 59));
  const KrausChannel ch = random_channel(2, 3, 60);
  std::vector<Mat> lifted;
  for (const Mat& k : ch.operators) lifted.push_back(linalg::kron(Mat::Identity(2, 2), k));
  Mat out = Mat::Zero(4, 4);
  for (const Mat& k : lifted) out += k * rho.state.mat() * k.adjoint();
  const BipartiteState mapped(2, 2, DensityMatrix(linalg::symmetrized(out)));
  const double before = correlated_coherence(rho, Kind::Affinity, 10, 13, 1e-7,
                                             light()).value;
  const double after = correlated_coherence(mapped, Kind::Affinity, 10, 13, 1e-7,
                                            light()).value;
  CHECK(after <= before + 1e-5);
}
