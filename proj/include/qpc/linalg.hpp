#pragma once

#include "qpc/errors.hpp"
#include "qpc/types.hpp"

namespace qpc::linalg {

// Eigenvalues in the band [-clip_band(H), 0) are rounded to zero by the PSD
// kernels; anything below is a hard NotPsd error.
inline constexpr double kClipRelTol = 1e-10;
// Eigenvalues of a Hermitian matrix above this count toward its support.
inline constexpr double kSupportTieTol = 1e-12;
// Maximum tolerated Hermiticity deviation max|H - H†| on spectral inputs.
inline constexpr double kHermitianTol = 1e-8;

struct Spectrum {
  RVec eigenvalues;   // ascending
  Mat eigenvectors;   // orthonormal columns, same order
};

struct JordanParts {
  Mat positive;    // Λ₊ = Σ_{λ>0} λ v v†
  Mat projector;   // support projector of Λ₊ (eigenvalues > kSupportTieTol)
};

double hermiticity_deviation(const Mat& m);
Mat symmetrized(const Mat& m);

// Spectral decomposition of a Hermitian matrix. The input is symmetrized as
// (H+H†)/2 first; deviations above kHermitianTol are rejected.
Spectrum eigh(const Mat& h);

Mat psd_sqrt(const Mat& h);
// Pseudo inverse square root on the support: eigenvalues ≤ rel_tol·λ_max map to 0.
Mat psd_inv_sqrt(const Mat& h, double rel_tol = kClipRelTol);

// Sum of singular values; for Hermitian M this is Σ|λ_i|.
double trace_norm(const Mat& m);

JordanParts positive_part(const Mat& h);

enum class Party { A, B };
Mat partial_trace(const Mat& rho, int n_a, int n_b, Party keep);

Mat kron(const Mat& a, const Mat& b);

}  // namespace qpc::linalg
