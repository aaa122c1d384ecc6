#include "qsas/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsas {

GellMannBasis gellmann_basis(int d) {
  detail::require(d >= 2, "gellmann_basis: dimension must be >= 2");
  GellMannBasis b;
  b.dim = d;
  b.elements.reserve(static_cast<size_t>(d) * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  b.elements.push_back(Mat::Identity(d, d) / std::sqrt(static_cast<double>(d)));

  // Symmetric pair generators (|j><k| + |k><j|)/sqrt(2), j < k.
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Mat m = Mat::Zero(d, d);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      b.elements.push_back(std::move(m));
    }
  // Antisymmetric pair generators (-i|j><k| + i|k><j|)/sqrt(2), j < k.
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Mat m = Mat::Zero(d, d);
      m(j, k) = Cplx(0, -inv_sqrt2);
      m(k, j) = Cplx(0, inv_sqrt2);
      b.elements.push_back(std::move(m));
    }
  // Diagonal generators (sum_{j<l} |j><j| - l|l><l|) / sqrt(l(l+1)).
  for (int l = 1; l < d; ++l) {
    Mat m = Mat::Zero(d, d);
    const double f = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = f;
    m(l, l) = -static_cast<double>(l) * f;
    b.elements.push_back(std::move(m));
  }
  return b;
}

GellMannBasis tensor_basis(const GellMannBasis& basis, int n_factors) {
  detail::require(n_factors >= 1, "tensor_basis: need at least one factor");
  double total = std::pow(static_cast<double>(basis.dim), n_factors);
  detail::require(total <= 64.0, "tensor_basis: total dimension " +
                                     std::to_string(total) + " exceeds 64");
  if (n_factors == 1) return basis;
  GellMannBasis prev = tensor_basis(basis, n_factors - 1);
  GellMannBasis out;
  out.dim = prev.dim * basis.dim;
  out.elements.reserve(prev.elements.size() * basis.elements.size());
  for (const Mat& a : prev.elements)
    for (const Mat& c : basis.elements) out.elements.push_back(kron(a, c));
  return out;
}

RMat gram_matrix(const GellMannBasis& basis) {
  const int n = basis.size();
  RMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Cplx v = (basis[i].adjoint() * basis[j]).trace();
      g(i, j) = v.real();
      if (std::abs(v.imag()) > tol::basis)
        throw std::runtime_error("gram_matrix: non-real inner product");
    }
  return g;
}

Vec to_coords(const Mat& a, const GellMannBasis& basis) {
  detail::require(a.rows() == basis.dim && a.cols() == basis.dim,
                  "to_coords: dimension mismatch");
  Vec coords(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    coords(i) = (basis[i].adjoint() * a).trace();
  return coords;
}

Mat from_coords(const Vec& coords, const GellMannBasis& basis) {
  detail::require(coords.size() == basis.size(), "from_coords: dimension mismatch");
  Mat a = Mat::Zero(basis.dim, basis.dim);
  for (int i = 0; i < basis.size(); ++i) a += coords(i) * basis[i];
  return a;
}

RVec to_real_coords(const Mat& a, const GellMannBasis& basis, double tolerance) {
  const Vec c = to_coords(a, basis);
  const double resid = c.imag().cwiseAbs().maxCoeff();
  if (resid > tolerance)
    throw std::runtime_error("to_real_coords: imaginary residue " +
                             std::to_string(resid));
  return c.real();
}

DensityMatrix::DensityMatrix(Mat rho, double tolerance) : rho_(std::move(rho)) {
  detail::require(rho_.rows() == rho_.cols(), "DensityMatrix: must be square");
  if (!is_hermitian(rho_, tolerance))
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  const double tr_err = std::abs(rho_.trace() - Cplx(1.0));
  if (tr_err > tolerance)
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(tr_err));
  const double min_eig = min_eigenvalue(rho_);
  if (min_eig < -tolerance)
    throw std::invalid_argument("DensityMatrix: not PSD, min eigenvalue " +
                                std::to_string(min_eig));
  if (rho_.norm() > 1.0 + tolerance)
    throw std::invalid_argument("DensityMatrix: Frobenius norm exceeds 1");
}

DensityMatrix maximally_mixed(int d) {
  return DensityMatrix(Mat::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix maximal_coherent(int d) {
  return DensityMatrix(Mat::Ones(d, d) / static_cast<double>(d));
}

BlochVector density_to_bloch(const DensityMatrix& rho, const GellMannBasis& basis) {
  const RVec coords = to_real_coords(rho.matrix(), basis);
  return coords.tail(basis.size() - 1);
}

DensityMatrix bloch_to_density(const BlochVector& x, const GellMannBasis& basis) {
  detail::require(x.size() == basis.size() - 1, "bloch_to_density: length mismatch");
  Mat rho = Mat::Identity(basis.dim, basis.dim) / static_cast<double>(basis.dim);
  for (int i = 0; i < x.size(); ++i) rho += x(i) * basis[i + 1];
  return DensityMatrix(std::move(rho));  // rejects non-states with diagnostics
}

RVec bloch_to_pauli(const BlochVector& x, int d) {
  return std::sqrt(static_cast<double>(d)) * x;
}

BlochVector pauli_to_bloch(const RVec& s, int d) {
  return s / std::sqrt(static_cast<double>(d));
}

RVec pauli_expectations(const DensityMatrix& rho) {
  detail::require(rho.dim() == 2, "pauli_expectations: qubit states only");
  static const GellMannBasis qubit = gellmann_basis(2);
  return bloch_to_pauli(density_to_bloch(rho, qubit), 2);
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, Cplx(0, -1), Cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace qsas
