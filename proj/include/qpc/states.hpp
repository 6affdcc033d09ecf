#pragma once

#include <cstdint>
#include <vector>

#include "qpc/errors.hpp"
#include "qpc/linalg.hpp"
#include "qpc/rng.hpp"
#include "qpc/types.hpp"

namespace qpc {

inline constexpr double kDensityTol = 1e-8;      // Hermiticity / PSD / trace slack
inline constexpr double kPriorSumTol = 1e-10;
inline constexpr double kBasisUnitaryTol = 1e-10;
inline constexpr double kKrausCompletenessTol = 1e-8;
inline constexpr double kZeroPrior = 1e-12;      // weights below this count as absent

// Hermitian, PSD (within kDensityTol), unit-trace matrix. Stored symmetrized.
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& mat() const { return mat_; }

 private:
  Mat mat_;
};

DensityMatrix validate_density(const Mat& m);

// A density matrix with a declared (n_a, n_b) tensor split and a reference
// basis for party a (columns of basis_a; computational basis by default).
struct BipartiteState {
  int n_a;
  int n_b;
  DensityMatrix state;
  Mat basis_a;

  BipartiteState(int na, int nb, DensityMatrix s);
  BipartiteState(int na, int nb, DensityMatrix s, Mat basis);
};

struct Ensemble {
  struct Member {
    double prior;
    DensityMatrix state;
  };
  std::vector<Member> members;

  explicit Ensemble(std::vector<Member> m);
  int size() const { return static_cast<int>(members.size()); }
  int dim() const { return members.empty() ? 0 : members.front().state.dim(); }
};

// Schmidt data of a pure bipartite vector. `coefficients` holds probability
// weights λ_i (squared amplitudes), descending; Σλ_i = 1.
struct SchmidtForm {
  RVec coefficients;
  Mat basis_a;   // columns |x_i⟩
  Mat basis_b;   // columns |y_i⟩
};

struct KrausChannel {
  std::vector<Mat> operators;

  explicit KrausChannel(std::vector<Mat> ops);
  int dim_in() const { return static_cast<int>(operators.front().cols()); }
  int dim_out() const { return static_cast<int>(operators.front().rows()); }
};

// --- generators (deterministic given seed) ---

// GG†/tr(GG†) for a dim×rank standard complex Ginibre matrix G.
DensityMatrix random_density(int dim, int rank, std::uint64_t seed);

// Haar distributed: QR of a complex Ginibre matrix with phase-fixed R diagonal.
Mat random_unitary(int dim, std::uint64_t seed);

// Stinespring slices of a Haar unitary on dim·kraus_count.
KrausChannel random_channel(int dim, int kraus_count, std::uint64_t seed);

// Kraus operators of the block form K_n = Σ_i |π_n(i)⟩⟨i| ⊗ B_{n,i} with π_n a
// permutation of the a-basis and, for each i, {B_{n,i}}_n a Kraus set on b.
// This family is closed on the partial-incoherent set.
KrausChannel random_partial_incoherent_channel(int n_a, int n_b, int kraus_count,
                                               std::uint64_t seed);

// The Lüders pinching channel {|i⟩⟨i| ⊗ I_b} itself.
KrausChannel luders_channel(int n_a, int n_b);

// (2,n) X-state: exact X sparsity pattern, valid density matrix; when
// full_rank, smallest eigenvalue ≥ 1e-6.
BipartiteState random_xstate(int n, std::uint64_t seed, bool full_rank);

// Haar-random pure state vector on `dim`.
Vec random_pure(int dim, std::uint64_t seed);

SchmidtForm schmidt(const Vec& psi, int n_a, int n_b);

// Σ_i (Π_i^a⊗I) ρ (Π_i^a⊗I) in the state's reference basis.
DensityMatrix luders_project(const BipartiteState& rho);

bool is_partial_incoherent(const BipartiteState& rho, double tol);

// True iff the eigenvectors (eigenvalue > tol) of all members, stacked as
// columns, have full column rank (SVD threshold 1e-8·σ_max).
bool is_linearly_independent(const Ensemble& e, double tol);

// Σ p_i |i⟩⟨i| ⊗ σ_i in the computational a-basis; generator for test suites.
BipartiteState random_partial_incoherent_state(int n_a, int n_b, std::uint64_t seed);

}  // namespace qpc
