#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qpc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Distance / similarity flavor used throughout: F(ρ,σ) = tr√(√σρ√σ),
// A(ρ,σ) = tr(√ρ√σ), d_X = 1 − X².
enum class Kind { Fidelity, Affinity };

inline const char* kind_name(Kind k) {
  return k == Kind::Fidelity ? "fidelity" : "affinity";
}

}  // namespace qpc
