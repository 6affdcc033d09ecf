#include "qpc/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpc {

namespace {

Mat ginibre(int rows, int cols, Rng& rng) {
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgaussian();
  return g;
}

double unitarity_defect(const Mat& u) {
  return (u.adjoint() * u - Mat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

DensityMatrix::DensityMatrix(Mat m) {
  if (m.rows() != m.cols()) {
    throw NonSquareError("density matrix must be square");
  }
  if (!m.allFinite()) throw NotFiniteError("density matrix has non-finite entries");
  const double dev = linalg::hermiticity_deviation(m);
  if (dev > kDensityTol) {
    throw NonHermitianError("density matrix Hermiticity deviation " + std::to_string(dev));
  }
  mat_ = linalg::symmetrized(m);
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kDensityTol) {
    throw TraceNotOneError("density matrix trace " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(mat_, Eigen::EigenvaluesOnly);
  const double lam_min = solver.eigenvalues().minCoeff();
  if (lam_min < -kDensityTol) {
    throw NotPsdError("density matrix eigenvalue " + std::to_string(lam_min));
  }
}

DensityMatrix validate_density(const Mat& m) { return DensityMatrix(m); }

BipartiteState::BipartiteState(int na, int nb, DensityMatrix s)
    : BipartiteState(na, nb, std::move(s), Mat::Identity(na, na)) {}

BipartiteState::BipartiteState(int na, int nb, DensityMatrix s, Mat basis)
    : n_a(na), n_b(nb), state(std::move(s)), basis_a(std::move(basis)) {
  if (n_a * n_b != state.dim()) {
    throw DimensionMismatchError("bipartite split " + std::to_string(n_a) + "x" +
                                 std::to_string(n_b) + " does not match dim " +
                                 std::to_string(state.dim()));
  }
  if (basis_a.rows() != n_a || basis_a.cols() != n_a) {
    throw DimensionMismatchError("basis_a must be " + std::to_string(n_a) + "x" +
                                 std::to_string(n_a));
  }
  if (unitarity_defect(basis_a) > kBasisUnitaryTol) {
    throw ValidationError("basis_a is not unitary within tolerance");
  }
}

Ensemble::Ensemble(std::vector<Member> m) : members(std::move(m)) {
  if (members.empty()) throw WrongMemberCountError("ensemble has no members");
  double sum = 0.0;
  const int d = members.front().state.dim();
  for (const Member& mem : members) {
    if (mem.prior < 0.0) throw PriorsSumError("negative prior " + std::to_string(mem.prior));
    if (mem.state.dim() != d) throw DimensionMismatchError("ensemble members differ in dim");
    sum += mem.prior;
  }
  if (std::abs(sum - 1.0) > kPriorSumTol) {
    throw PriorsSumError("priors sum to " + std::to_string(sum));
  }
}

KrausChannel::KrausChannel(std::vector<Mat> ops) : operators(std::move(ops)) {
  if (operators.empty()) throw ValidationError("channel has no Kraus operators");
  const Eigen::Index din = operators.front().cols();
  const Eigen::Index dout = operators.front().rows();
  Mat sum = Mat::Zero(din, din);
  for (const Mat& k : operators) {
    if (k.cols() != din || k.rows() != dout) {
      throw DimensionMismatchError("Kraus operators differ in shape");
    }
    sum += k.adjoint() * k;
  }
  const double defect = (sum - Mat::Identity(din, din)).cwiseAbs().maxCoeff();
  if (defect > kKrausCompletenessTol) {
    throw ValidationError("Kraus completeness defect " + std::to_string(defect));
  }
}

DensityMatrix random_density(int dim, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) {
    throw BadRankError("rank " + std::to_string(rank) + " for dim " + std::to_string(dim));
  }
  Rng rng(seed);
  Mat g = ginibre(dim, rank, rng);
  Mat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

Mat random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Mat g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const cplx rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0.0 ? rii / mag : cplx(1.0, 0.0);
  }
  return q;
}

KrausChannel random_channel(int dim, int kraus_count, std::uint64_t seed) {
  if (kraus_count < 1) throw ValidationError("kraus_count must be ≥ 1");
  Mat u = random_unitary(dim * kraus_count, seed);
  std::vector<Mat> ops;
  ops.reserve(static_cast<std::size_t>(kraus_count));
  for (int n = 0; n < kraus_count; ++n) {
    ops.push_back(u.block(n * dim, 0, dim, dim));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel random_partial_incoherent_channel(int n_a, int n_b, int kraus_count,
                                               std::uint64_t seed) {
  if (kraus_count < 1) throw ValidationError("kraus_count must be ≥ 1");
  Rng rng(seed);

  // One Kraus set on party b per a-index, one a-permutation per Kraus slot.
  std::vector<KrausChannel> b_sets;
  b_sets.reserve(static_cast<std::size_t>(n_a));
  for (int i = 0; i < n_a; ++i) {
    b_sets.push_back(random_channel(n_b, kraus_count, rng.fork(i).seed()));
  }
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(kraus_count));
  for (int n = 0; n < kraus_count; ++n) {
    std::vector<int> p(static_cast<std::size_t>(n_a));
    std::iota(p.begin(), p.end(), 0);
    for (int i = n_a - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
    perms[static_cast<std::size_t>(n)] = std::move(p);
  }

  const int d = n_a * n_b;
  std::vector<Mat> ops;
  ops.reserve(static_cast<std::size_t>(kraus_count));
  for (int n = 0; n < kraus_count; ++n) {
    Mat k = Mat::Zero(d, d);
    for (int i = 0; i < n_a; ++i) {
      const int target = perms[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
      k.block(target * n_b, i * n_b, n_b, n_b) =
          b_sets[static_cast<std::size_t>(i)].operators[static_cast<std::size_t>(n)];
    }
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel luders_channel(int n_a, int n_b) {
  const int d = n_a * n_b;
  std::vector<Mat> ops;
  ops.reserve(static_cast<std::size_t>(n_a));
  for (int i = 0; i < n_a; ++i) {
    Mat k = Mat::Zero(d, d);
    k.block(i * n_b, i * n_b, n_b, n_b) = Mat::Identity(n_b, n_b);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

BipartiteState random_xstate(int n, std::uint64_t seed, bool full_rank) {
  const int d = 2 * n;
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    Rng draw = rng.fork(static_cast<std::uint64_t>(attempt));
    RVec diag(d);
    for (int i = 0; i < d; ++i) diag[i] = 0.05 + draw.uniform();
    diag /= diag.sum();

    Mat m = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = diag[i];
    double lam_min = diag.minCoeff();
    for (int i = 0; i < n; ++i) {
      const int j = d - 1 - i;
      const double cap = std::sqrt(diag[i] * diag[j]);
      const double t = (full_rank ? 0.85 : 1.0) * draw.uniform();
      const double phase = 2.0 * M_PI * draw.uniform();
      const cplx x = t * cap * std::exp(cplx(0.0, phase));
      m(i, j) = x;
      m(j, i) = std::conj(x);
      // eigenvalues of the 2x2 block [[p,x],[x̄,q]]
      const double p = diag[i], q = diag[j];
      const double disc = std::sqrt((p - q) * (p - q) + 4.0 * std::norm(x));
      lam_min = std::min(lam_min, 0.5 * (p + q - disc));
    }
    if (full_rank && lam_min < 1e-6) continue;
    return BipartiteState(2, n, DensityMatrix(std::move(m)));
  }
}

Vec random_pure(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.cgaussian();
  v.normalize();
  return v;
}

SchmidtForm schmidt(const Vec& psi, int n_a, int n_b) {
  if (psi.size() != static_cast<Eigen::Index>(n_a) * n_b) {
    throw DimensionMismatchError("schmidt: vector length does not match split");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw NotNormalizedError("schmidt: |psi| = " + std::to_string(psi.norm()));
  }
  Mat m(n_a, n_b);
  for (int i = 0; i < n_a; ++i)
    for (int j = 0; j < n_b; ++j) m(i, j) = psi[i * n_b + j];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtForm out;
  const RVec s = svd.singularValues();   // descending
  out.coefficients = s.array().square();
  out.basis_a = svd.matrixU();
  out.basis_b = svd.matrixV().conjugate();
  return out;
}

DensityMatrix luders_project(const BipartiteState& rho) {
  const Mat& b = rho.basis_a;
  const int nb = rho.n_b;
  const Mat& m = rho.state.mat();
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (int i = 0; i < rho.n_a; ++i) {
    const Mat proj = linalg::kron(b.col(i) * b.col(i).adjoint(), Mat::Identity(nb, nb));
    out += proj * m * proj;
  }
  return DensityMatrix(std::move(out));
}

bool is_partial_incoherent(const BipartiteState& rho, double tol) {
  const Mat projected = luders_project(rho).mat();
  return (rho.state.mat() - projected).cwiseAbs().maxCoeff() <= tol;
}

bool is_linearly_independent(const Ensemble& e, double tol) {
  std::vector<Vec> vectors;
  for (const Ensemble::Member& m : e.members) {
    linalg::Spectrum s = linalg::eigh(m.state.mat());
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues[i] > tol) vectors.push_back(s.eigenvectors.col(i));
    }
  }
  if (vectors.empty()) return true;
  Mat stack(e.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t c = 0; c < vectors.size(); ++c) stack.col(static_cast<Eigen::Index>(c)) = vectors[c];
  Eigen::JacobiSVD<Mat> svd(stack);
  const RVec sv = svd.singularValues();
  const double thresh = 1e-8 * sv[0];
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thresh) ++rank;
  return rank == stack.cols();
}

BipartiteState random_partial_incoherent_state(int n_a, int n_b, std::uint64_t seed) {
  Rng rng(seed);
  RVec p(n_a);
  for (int i = 0; i < n_a; ++i) p[i] = 0.05 + rng.uniform();
  p /= p.sum();
  const int d = n_a * n_b;
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < n_a; ++i) {
    DensityMatrix block = random_density(n_b, n_b, rng.fork(i).seed());
    m.block(i * n_b, i * n_b, n_b, n_b) = p[i] * block.mat();
  }
  return BipartiteState(n_a, n_b, DensityMatrix(std::move(m)));
}

}  // namespace qpc
