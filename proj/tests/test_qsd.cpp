#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <qpc/errors.hpp>
#include <qpc/qsd.hpp>
#include <qpc/rng.hpp>
#include <qpc/states.hpp>

#include "oracles.hpp"

using namespace qpc;

namespace {

Ensemble binary(const DensityMatrix& a, const DensityMatrix& b, double eta = 0.5) {
  std::vector<Ensemble::Member> m;
  m.push_back({eta, a});
  m.push_back({1.0 - eta, b});
  return Ensemble(m);
}

Povm projective_pair(const Vec& v) {
  const int d = static_cast<int>(v.size());
  std::vector<Mat> effects;
  effects.push_back(v * v.adjoint());
  effects.push_back(Mat::Identity(d, d) - v * v.adjoint());
  return Povm(std::move(effects));
}

}  // namespace

TEST_CASE("Povm rejects effects that do not resolve the identity") {
  std::vector<Mat> half;
  half.push_back(0.5 * Mat::Identity(2, 2));
  half.push_back(0.25 * Mat::Identity(2, 2));
  CHECK_THROWS_AS(Povm{std::move(half)}, ValidationError);
}

TEST_CASE("success_probability is exact for orthogonal pure members") {
  const Ensemble e = binary(testing::pure_state(testing::ket(2, 0)),
                            testing::pure_state(testing::ket(2, 1)), 0.3);
  const Povm m = projective_pair(testing::ket(2, 0));
  CHECK_NEAR(success_probability(e, m), 1.0, 1e-12);
}

TEST_CASE("success_probability demands one effect per member") {
  const Ensemble e = binary(testing::pure_state(testing::ket(3, 0)),
                            testing::pure_state(testing::ket(3, 1)));
  std::vector<Mat> three;
  three.push_back(Mat::Identity(3, 3) / 3.0);
  three.push_back(Mat::Identity(3, 3) / 3.0);
  three.push_back(Mat::Identity(3, 3) / 3.0);
  CHECK_THROWS_AS(success_probability(e, Povm{std::move(three)}), CountMismatchError);
}

TEST_CASE("helstrom separates orthogonal states perfectly") {
  const Ensemble e = binary(testing::pure_state(testing::ket(2, 0)),
                            testing::pure_state(testing::ket(2, 1)), 0.7);
  const DiscriminationResult r = helstrom(e);
  CHECK_NEAR(r.success_prob, 1.0, 1e-12);
  CHECK_NEAR(r.error_prob, 0.0, 1e-12);
  CHECK(r.method == Method::HelstromExact);
}

TEST_CASE("helstrom on equiprobable |0>,|+> gives the textbook value") {
  const Ensemble e = binary(testing::pure_state(testing::ket(2, 0)),
                            testing::pure_state(testing::plus()));
  const DiscriminationResult r = helstrom(e);
  CHECK_NEAR(r.success_prob, 0.5 * (1.0 + 1.0 / std::sqrt(2.0)), 1e-12);
  CHECK_NEAR(success_probability(e, r.measurement), r.success_prob, 1e-12);
}

TEST_CASE("helstrom handles skewed priors via the trace norm formula") {
  const double eta = 0.9;
  const DensityMatrix rho = random_density(3, 3, 7);
  const DensityMatrix sig = random_density(3, 2, 8);
  const Mat lambda = eta * rho.mat() - (1.0 - eta) * sig.mat();
  const double expected = 0.5 * (1.0 + linalg::trace_norm(lambda));
  const DiscriminationResult r = helstrom(binary(rho, sig, eta));
  CHECK_NEAR(r.success_prob, expected, 1e-12);
  CHECK_NEAR(success_probability(binary(rho, sig, eta), r.measurement), expected, 1e-10);
}

TEST_CASE("helstrom refuses ensembles that are not binary") {
  std::vector<Ensemble::Member> m;
  m.push_back({0.4, testing::pure_state(testing::ket(3, 0))});
  m.push_back({0.3, testing::pure_state(testing::ket(3, 1))});
  m.push_back({0.3, testing::pure_state(testing::ket(3, 2))});
  CHECK_THROWS_AS(helstrom(Ensemble(m)), WrongMemberCountError);
}

TEST_CASE("lsm_povm is a complete measurement and perfect on orthogonal members") {
  std::vector<Ensemble::Member> m;
  m.push_back({0.4, testing::pure_state(testing::ket(3, 0))});
  m.push_back({0.3, testing::pure_state(testing::ket(3, 1))});
  m.push_back({0.3, testing::pure_state(testing::ket(3, 2))});
  const Ensemble e(m);
  const Povm povm = lsm_povm(e);
  Mat sum = Mat::Zero(3, 3);
  for (const Mat& eff : povm.effects) sum += eff;
  CHECK((sum - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_NEAR(lsm_error(e), 0.0, 1e-12);
}

TEST_CASE("lsm is never better than helstrom on binary ensembles") {
  Rng rng(19);
  for (int t = 0; t < 20; ++t) {
    const int dim = 2 + t % 3;
    const Ensemble e = binary(random_density(dim, dim, rng.next_u64()),
                              random_density(dim, dim, rng.next_u64()),
                              0.2 + 0.6 * rng.uniform());
    CHECK(lsm_error(e) >= helstrom(e).error_prob - 1e-10);
    const DiscriminationResult lr = lsm_result(e);
    CHECK_NEAR(lr.success_prob, success_probability(e, lr.measurement), 1e-12);
    CHECK(lr.method == Method::Lsm);
  }
}

TEST_CASE("evaluate reproduces a fixed measurement's statistics") {
  const Ensemble e = binary(testing::pure_state(testing::ket(2, 0)),
                            testing::pure_state(testing::plus()));
  const Povm m = projective_pair(testing::ket(2, 0));
  const DiscriminationResult r = evaluate(e, m);
  CHECK_NEAR(r.success_prob, success_probability(e, m), 1e-15);
  CHECK_NEAR(r.success_prob + r.error_prob, 1.0, 1e-15);
  CHECK(r.method == Method::Evaluated);
}

TEST_CASE("optimal_vn recovers the Helstrom value on binary ensembles") {
  Rng rng(23);
  for (int t = 0; t < 6; ++t) {
    const int dim = 2 + t % 2;
    const Ensemble e = binary(random_density(dim, dim, rng.next_u64()),
                              random_density(dim, dim, rng.next_u64()),
                              0.3 + 0.4 * rng.uniform());
    VnOptions opts;
    opts.restarts = 6;
    opts.seed = rng.next_u64();
    const DiscriminationResult r = optimal_vn(e, dim, opts);
    CHECK_NEAR(r.success_prob, helstrom(e).success_prob, 1e-9);
  }
}

TEST_CASE("optimal_vn identifies three orthogonal states perfectly") {
  std::vector<Ensemble::Member> m;
  m.push_back({0.5, testing::pure_state(testing::ket(3, 0))});
  m.push_back({0.25, testing::pure_state(testing::ket(3, 1))});
  m.push_back({0.25, testing::pure_state(testing::ket(3, 2))});
  VnOptions opts;
  opts.restarts = 8;
  opts.seed = 5;
  const DiscriminationResult r = optimal_vn(Ensemble(m), 3, opts);
  CHECK_NEAR(r.success_prob, 1.0, 1e-9);
  CHECK(r.method == Method::VnOptimized);
}

TEST_CASE("optimal_vn dominates both the LSM and the best blind guess") {
  Rng rng(29);
  for (int t = 0; t < 5; ++t) {
    std::vector<Ensemble::Member> m;
    double rest = 1.0;
    for (int i = 0; i < 3; ++i) {
      const double p = (i == 2) ? rest : rest * (0.2 + 0.4 * rng.uniform());
      rest -= (i == 2) ? 0.0 : p;
      m.push_back({p, random_density(4, 2, rng.next_u64())});
    }
    const Ensemble e(m);
    VnOptions opts;
    opts.restarts = 10;
    opts.seed = rng.next_u64();
    const DiscriminationResult r = optimal_vn(e, 4, opts);
    double max_prior = 0.0;
    for (const auto& mem : e.members) max_prior = std::max(max_prior, mem.prior);
    CHECK(r.success_prob >= 1.0 - lsm_error(e) - 1e-9);
    CHECK(r.success_prob >= max_prior - 1e-9);
    CHECK_NEAR(success_probability(e, r.measurement), r.success_prob, 1e-10);
  }
}

TEST_CASE("optimal_vn never loses value when given more restarts") {
  Rng rng(31);
  std::vector<Ensemble::Member> m;
  m.push_back({0.4, random_density(4, 3, rng.next_u64())});
  m.push_back({0.35, random_density(4, 2, rng.next_u64())});
  m.push_back({0.25, random_density(4, 4, rng.next_u64())});
  const Ensemble e(m);
  VnOptions small, large;
  small.restarts = 2;
  large.restarts = 8;
  small.seed = large.seed = 99;
  CHECK(optimal_vn(e, 4, large).success_prob >=
        optimal_vn(e, 4, small).success_prob - 1e-12);
}

TEST_CASE("optimal_vn is bitwise deterministic for a fixed seed") {
  Rng rng(37);
  std::vector<Ensemble::Member> m;
  m.push_back({0.5, random_density(3, 2, rng.next_u64())});
  m.push_back({0.3, random_density(3, 3, rng.next_u64())});
  m.push_back({0.2, random_density(3, 1, rng.next_u64())});
  const Ensemble e(m);
  VnOptions opts;
  opts.restarts = 5;
  opts.seed = 1234;
  const DiscriminationResult a = optimal_vn(e, 3, opts);
  const DiscriminationResult b = optimal_vn(e, 3, opts);
  CHECK(a.success_prob == b.success_prob);
  for (int i = 0; i < a.measurement.size(); ++i)
    CHECK((a.measurement.effects[i] - b.measurement.effects[i]).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("optimal_vn validates the joint dimension") {
  const Ensemble e = binary(random_density(3, 3, 40), random_density(3, 3, 41));
  CHECK_THROWS_AS(optimal_vn(e, 4), DimensionMismatchError);
}
