#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qsas {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Default tolerance ladder used across modules.
namespace tol {
inline constexpr double structural = 1e-10;   // Hermiticity, trace, completeness
inline constexpr double convergence = 1e-12;  // iterative convergence, absolute
inline constexpr double closed_form = 1e-8;   // agreement with analytic entry tables
inline constexpr double basis = 1e-12;        // basis orthonormality / coordinate maps
}  // namespace tol

}  // namespace qsas
