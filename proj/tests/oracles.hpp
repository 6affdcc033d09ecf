#pragma once

// Shared fixtures and tiny closed-form oracles for the unit tests.

#include <cmath>
#include <complex>

#include <qpc/linalg.hpp>
#include <qpc/states.hpp>
#include <qpc/types.hpp>

#define CHECK_NEAR(a, b, tol) CHECK_MESSAGE(std::abs((a) - (b)) <= (tol), \
                                            (a), " vs ", (b), " (tol ", (tol), ")")

namespace testing {

inline qpc::Vec ket(int dim, int i) {
  qpc::Vec v = qpc::Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

inline qpc::Vec plus() {
  qpc::Vec v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

inline qpc::Vec bell() {
  qpc::Vec v = qpc::Vec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

inline qpc::DensityMatrix pure_state(const qpc::Vec& psi) {
  return qpc::DensityMatrix(psi * psi.adjoint());
}

// For commuting (simultaneously diagonal) states both similarities coincide
// with the classical Bhattacharyya coefficient.
inline double bhattacharyya(const qpc::RVec& p, const qpc::RVec& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += std::sqrt(p(i) * q(i));
  return s;
}

// Fidelity / affinity of pure states from the overlap alone.
inline double pure_fidelity(const qpc::Vec& a, const qpc::Vec& b) {
  return std::abs((a.adjoint() * b)(0, 0));
}
inline double pure_affinity(const qpc::Vec& a, const qpc::Vec& b) {
  const double f = pure_fidelity(a, b);
  return f * f;
}

}  // namespace testing
