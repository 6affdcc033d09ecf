#include "qpc/linalg.hpp"

#include <cmath>

namespace qpc::linalg {

namespace {

void require_square(const Mat& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw NonSquareError(std::string(who) + ": matrix is " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double clip_band(double lambda_max) {
  return kClipRelTol * std::max(1.0, lambda_max);
}

}  // namespace

double hermiticity_deviation(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Mat symmetrized(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Spectrum eigh(const Mat& h) {
  require_square(h, "eigh");
  if (!h.allFinite()) throw NotFiniteError("eigh: non-finite entries");
  const double dev = hermiticity_deviation(h);
  if (dev > kHermitianTol) {
    throw NonHermitianError("eigh: Hermiticity deviation " + std::to_string(dev));
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrized(h));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigensolver did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Mat psd_sqrt(const Mat& h) {
  Spectrum s = eigh(h);
  const double lam_max = s.eigenvalues.size() ? s.eigenvalues.maxCoeff() : 0.0;
  const double band = clip_band(lam_max);
  RVec roots(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double lam = s.eigenvalues[i];
    if (lam < -band) {
      throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lam) +
                        " below tolerance band");
    }
    roots[i] = lam > 0.0 ? std::sqrt(lam) : 0.0;
  }
  return s.eigenvectors * roots.asDiagonal() * s.eigenvectors.adjoint();
}

Mat psd_inv_sqrt(const Mat& h, double rel_tol) {
  Spectrum s = eigh(h);
  const double lam_max = s.eigenvalues.size() ? s.eigenvalues.maxCoeff() : 0.0;
  const double band = clip_band(lam_max);
  const double support = rel_tol * std::max(lam_max, 0.0);
  RVec inv_roots(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double lam = s.eigenvalues[i];
    if (lam < -band) {
      throw NotPsdError("psd_inv_sqrt: eigenvalue " + std::to_string(lam) +
                        " below tolerance band");
    }
    inv_roots[i] = lam > support ? 1.0 / std::sqrt(lam) : 0.0;
  }
  return s.eigenvectors * inv_roots.asDiagonal() * s.eigenvectors.adjoint();
}

double trace_norm(const Mat& m) {
  require_square(m, "trace_norm");
  if (!m.allFinite()) throw NotFiniteError("trace_norm: non-finite entries");
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

JordanParts positive_part(const Mat& h) {
  Spectrum s = eigh(h);
  const Eigen::Index n = s.eigenvalues.size();
  Mat pos = Mat::Zero(n, n);
  Mat proj = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = s.eigenvalues[i];
    if (lam > 0.0) {
      pos += lam * (s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint());
    }
    if (lam > kSupportTieTol) {
      proj += s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint();
    }
  }
  return JordanParts{std::move(pos), std::move(proj)};
}

Mat partial_trace(const Mat& rho, int n_a, int n_b, Party keep) {
  const Eigen::Index d = static_cast<Eigen::Index>(n_a) * n_b;
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionMismatchError("partial_trace: state is " + std::to_string(rho.rows()) +
                                 "x" + std::to_string(rho.cols()) + ", split " +
                                 std::to_string(n_a) + "x" + std::to_string(n_b));
  }
  if (keep == Party::A) {
    Mat out = Mat::Zero(n_a, n_a);
    for (int i = 0; i < n_a; ++i)
      for (int j = 0; j < n_a; ++j)
        for (int k = 0; k < n_b; ++k) out(i, j) += rho(i * n_b + k, j * n_b + k);
    return out;
  }
  Mat out = Mat::Zero(n_b, n_b);
  for (int i = 0; i < n_b; ++i)
    for (int j = 0; j < n_b; ++j)
      for (int k = 0; k < n_a; ++k) out(i, j) += rho(k * n_b + i, k * n_b + j);
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace qpc::linalg
