#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <qpc/errors.hpp>
#include <qpc/linalg.hpp>
#include <qpc/states.hpp>

#include "oracles.hpp"

using namespace qpc;

TEST_CASE("DensityMatrix validates its input") {
  Mat ok = Mat::Zero(2, 2);
  ok(0, 0) = 0.5;
  ok(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix{ok});

  Mat low_trace = ok;
  low_trace(1, 1) = 0.4;  // trace 0.9
  CHECK_THROWS_AS(DensityMatrix{low_trace}, TraceNotOneError);

  Mat skew = ok;
  skew(0, 1) = cplx(0.2, 0.0);  // no matching lower element
  CHECK_THROWS_AS(DensityMatrix{skew}, NonHermitianError);

  Mat indefinite = Mat::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{indefinite}, NotPsdError);

  CHECK_THROWS_AS(DensityMatrix{Mat::Zero(2, 3)}, NonSquareError);

  Mat withnan = ok;
  withnan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DensityMatrix{withnan}, NotFiniteError);
}

TEST_CASE("random_density produces valid states of requested rank") {
  for (int rank = 1; rank <= 4; ++rank) {
    const DensityMatrix rho = random_density(4, rank, 100 + rank);
    CHECK_NEAR(rho.mat().trace().real(), 1.0, 1e-12);
    const linalg::Spectrum s = linalg::eigh(rho.mat());
    CHECK(s.eigenvalues.minCoeff() > -1e-12);
    int support = 0;
    for (int i = 0; i < 4; ++i)
      if (s.eigenvalues(i) > 1e-9) ++support;
    CHECK(support == rank);
  }
}

TEST_CASE("random_unitary is unitary and seed-deterministic") {
  const Mat u = random_unitary(5, 77);
  CHECK((u.adjoint() * u - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  const Mat v = random_unitary(5, 77);
  CHECK((u - v).cwiseAbs().maxCoeff() == 0.0);
  const Mat w = random_unitary(5, 78);
  CHECK((u - w).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("random_channel is completely positive and trace preserving") {
  const KrausChannel ch = random_channel(3, 4, 33);
  Mat sum = Mat::Zero(3, 3);
  for (const Mat& k : ch.operators) sum += k.adjoint() * k;
  CHECK((sum - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

  const DensityMatrix rho = random_density(3, 3, 34);
  Mat out = Mat::Zero(3, 3);
  for (const Mat& k : ch.operators) out += k * rho.mat() * k.adjoint();
  CHECK_NEAR(out.trace().real(), 1.0, 1e-10);
}

TEST_CASE("random_partial_incoherent_channel preserves the incoherent set") {
  const int n_a = 2, n_b = 3;
  const KrausChannel ch = random_partial_incoherent_channel(n_a, n_b, 3, 55);
  Mat sum = Mat::Zero(n_a * n_b, n_a * n_b);
  for (const Mat& k : ch.operators) sum += k.adjoint() * k;
  CHECK((sum - Mat::Identity(n_a * n_b, n_a * n_b)).cwiseAbs().maxCoeff() < 1e-8);

  const BipartiteState pi = random_partial_incoherent_state(n_a, n_b, 56);
  Mat out = Mat::Zero(n_a * n_b, n_a * n_b);
  for (const Mat& k : ch.operators) out += k * pi.state.mat() * k.adjoint();
  const BipartiteState mapped(n_a, n_b, DensityMatrix(linalg::symmetrized(out)));
  CHECK(is_partial_incoherent(mapped, 1e-8));
}

TEST_CASE("luders_project lands in the incoherent set and is idempotent") {
  const BipartiteState rho(2, 2, random_density(4, 4, 60));
  const BipartiteState proj(2, 2, luders_project(rho), rho.basis_a);
  CHECK(is_partial_incoherent(proj, 1e-10));
  const DensityMatrix twice = luders_project(proj);
  CHECK((twice.mat() - proj.state.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("is_partial_incoherent respects the declared local basis") {
  const Mat u = random_unitary(2, 61);
  const BipartiteState pi = random_partial_incoherent_state(2, 2, 62);
  const Mat rotated = linalg::kron(u, Mat::Identity(2, 2)) * pi.state.mat() *
                      linalg::kron(u, Mat::Identity(2, 2)).adjoint();
  const BipartiteState wrong_basis(2, 2, DensityMatrix(rotated));
  const BipartiteState right_basis(2, 2, DensityMatrix(rotated), u);
  CHECK_FALSE(is_partial_incoherent(wrong_basis, 1e-8));
  CHECK(is_partial_incoherent(right_basis, 1e-8));
}

TEST_CASE("random_xstate honours the sparsity pattern") {
  const int n = 3;
  const BipartiteState xs = random_xstate(n, 70, true);
  const int d = 2 * n;
  const Mat& m = xs.state.mat();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const bool allowed = (r == c) || (r + c == d - 1);
      if (!allowed) CHECK(std::abs(m(r, c)) == 0.0);
    }
  const linalg::Spectrum s = linalg::eigh(m);
  CHECK(s.eigenvalues.minCoeff() > 1e-6);  // full rank requested
}

TEST_CASE("random_pure returns a unit vector") {
  const Vec psi = random_pure(5, 80);
  CHECK_NEAR(psi.norm(), 1.0, 1e-12);
}

TEST_CASE("schmidt decomposes the Bell state") {
  const SchmidtForm sf = schmidt(testing::bell(), 2, 2);
  CHECK_NEAR(sf.coefficients(0), 0.5, 1e-12);
  CHECK_NEAR(sf.coefficients(1), 0.5, 1e-12);
  // Reconstruct and compare up to the (fixed) basis choice.
  Vec rebuilt = Vec::Zero(4);
  for (int i = 0; i < 2; ++i) {
    const Vec term = linalg::kron(Mat(sf.basis_a.col(i)), Mat(sf.basis_b.col(i)));
    rebuilt += std::sqrt(sf.coefficients(i)) * term;
  }
  CHECK_NEAR(std::abs(rebuilt.dot(testing::bell())), 1.0, 1e-10);
}

TEST_CASE("schmidt coefficients are descending probabilities") {
  const Vec psi = random_pure(6, 81);
  const SchmidtForm sf = schmidt(psi, 2, 3);
  CHECK_NEAR(sf.coefficients.sum(), 1.0, 1e-10);
  for (int i = 1; i < sf.coefficients.size(); ++i)
    CHECK(sf.coefficients(i) <= sf.coefficients(i - 1) + 1e-12);
}

TEST_CASE("is_linearly_independent distinguishes spanning sets") {
  const Vec zero = testing::ket(2, 0);
  const Vec plus = testing::plus();
  std::vector<Ensemble::Member> two;
  two.push_back({0.5, testing::pure_state(zero)});
  two.push_back({0.5, testing::pure_state(plus)});
  CHECK(is_linearly_independent(Ensemble(two), 1e-9));

  std::vector<Ensemble::Member> dup;
  dup.push_back({0.5, testing::pure_state(zero)});
  dup.push_back({0.5, testing::pure_state(zero)});
  CHECK_FALSE(is_linearly_independent(Ensemble(dup), 1e-9));

  std::vector<Ensemble::Member> three;
  three.push_back({0.4, testing::pure_state(zero)});
  three.push_back({0.3, testing::pure_state(testing::ket(2, 1))});
  three.push_back({0.3, testing::pure_state(plus)});
  CHECK_FALSE(is_linearly_independent(Ensemble(three), 1e-9));
}

TEST_CASE("Ensemble validates priors and dimensions") {
  std::vector<Ensemble::Member> short_sum;
  short_sum.push_back({0.5, random_density(2, 2, 90)});
  short_sum.push_back({0.3, random_density(2, 2, 91)});
  CHECK_THROWS_AS(Ensemble{short_sum}, PriorsSumError);

  std::vector<Ensemble::Member> negative;
  negative.push_back({1.2, random_density(2, 2, 92)});
  negative.push_back({-0.2, random_density(2, 2, 93)});
  CHECK_THROWS_AS(Ensemble{negative}, ValidationError);

  std::vector<Ensemble::Member> mixed_dims;
  mixed_dims.push_back({0.5, random_density(2, 2, 94)});
  mixed_dims.push_back({0.5, random_density(3, 3, 95)});
  CHECK_THROWS_AS(Ensemble{mixed_dims}, DimensionMismatchError);
}

TEST_CASE("BipartiteState validates the split and the basis") {
  CHECK_THROWS_AS(BipartiteState(2, 3, random_density(4, 4, 96)), DimensionMismatchError);

  Mat not_unitary = Mat::Identity(2, 2);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(BipartiteState(2, 2, random_density(4, 4, 97), not_unitary),
                  ValidationError);
}
