#pragma once

// Dense matrix kernel: norms, spectra, decompositions and the matrix
// exponential. Everything here is a pure function of its inputs; matrices
// stay small (superoperators of a few qudits), so robustness is preferred
// over speed throughout.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsas/types.hpp"

namespace qsas {

namespace detail {
inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}
template <typename D>
void require_square(const Eigen::MatrixBase<D>& a, const char* op) {
  require(a.rows() == a.cols(),
          std::string(op) + ": matrix must be square, got " +
              std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}
}  // namespace detail

template <typename D>
auto dagger(const Eigen::MatrixBase<D>& a) {
  return a.adjoint().eval();
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Out = Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Out out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

template <typename D>
bool is_hermitian(const Eigen::MatrixBase<D>& a, double tolerance = tol::structural) {
  detail::require_square(a, "is_hermitian");
  return (a.derived() - a.derived().adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

/// Minimum eigenvalue of the Hermitian part; a is expected Hermitian.
inline double min_eigenvalue(const Mat& a) {
  detail::require_square(a, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

inline bool is_psd(const Mat& a, double tolerance = tol::structural) {
  return is_hermitian(a, tolerance) && min_eigenvalue(a) >= -tolerance;
}

/// Singular values via the Hermitian eigenproblem of A A^dagger, descending.
/// (The SVD-based route lives in svd(); tests cross-check the two.)
template <typename D>
RVec singular_values_via_gram(const Eigen::MatrixBase<D>& a) {
  using MatT = Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  MatT gram = a.derived() * a.derived().adjoint();
  Eigen::SelfAdjointEigenSolver<MatT> es(gram);
  RVec sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::reverse(sv.begin(), sv.end());
  return sv;
}

/// Schatten p-norm ||A||_p = (sum_i sigma_i^p)^{1/p}; p=1 is the trace norm,
/// p=2 the Frobenius norm.
template <typename D>
double schatten_norm(const Eigen::MatrixBase<D>& a, double p) {
  detail::require_square(a, "schatten_norm");
  detail::require(p >= 1.0, "schatten_norm: p must be >= 1");
  const RVec sv = singular_values_via_gram(a);
  if (p == 1.0) return sv.sum();
  double acc = 0.0;
  for (double s : sv) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

enum class InducedNorm { spectral, col_sum, row_sum };

template <typename D>
double induced_norm(const Eigen::MatrixBase<D>& a, InducedNorm kind) {
  detail::require_square(a, "induced_norm");
  switch (kind) {
    case InducedNorm::spectral: {
      using MatT = Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
      Eigen::JacobiSVD<MatT> s(a.derived());
      return s.singularValues()(0);
    }
    case InducedNorm::col_sum:
      return a.cwiseAbs().colwise().sum().maxCoeff();
    case InducedNorm::row_sum:
      return a.cwiseAbs().rowwise().sum().maxCoeff();
  }
  throw std::logic_error("induced_norm: unknown kind");
}

inline const char* induced_norm_name(InducedNorm kind) {
  switch (kind) {
    case InducedNorm::spectral: return "spectral";
    case InducedNorm::col_sum: return "col_sum";
    case InducedNorm::row_sum: return "row_sum";
  }
  return "?";
}

struct Spectrum {
  Vec eigenvalues;   // descending by modulus; ties by real part, then imag
  Mat eigenvectors;  // matching columns; empty when not requested
};

/// Deterministic eigenvalue ordering used in all reports.
inline std::vector<Eigen::Index> eigen_order(const Vec& v) {
  std::vector<Eigen::Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double mi = std::abs(v(i)), mj = std::abs(v(j));
    if (mi != mj) return mi > mj;
    if (v(i).real() != v(j).real()) return v(i).real() > v(j).real();
    return v(i).imag() > v(j).imag();
  });
  return idx;
}

inline Spectrum eig(const Mat& a, bool with_vectors = true) {
  detail::require_square(a, "eig");
  Eigen::ComplexEigenSolver<Mat> es(a, with_vectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig: eigensolver failed to converge");
  const auto idx = eigen_order(es.eigenvalues());
  Spectrum out;
  out.eigenvalues.resize(a.rows());
  if (with_vectors) out.eigenvectors.resize(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    out.eigenvalues(k) = es.eigenvalues()(idx[k]);
    if (with_vectors) out.eigenvectors.col(k) = es.eigenvectors().col(idx[k]);
  }
  return out;
}

inline Spectrum eig(const RMat& a, bool with_vectors = true) {
  return eig(Mat(a.cast<Cplx>()), with_vectors);
}

struct SvdResult {
  RVec singular_values;  // descending
  Mat u, v;              // empty when not requested; a = u * diag(s) * v^dagger
};

inline SvdResult svd(const Mat& a, bool with_factors = false) {
  unsigned opts = with_factors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::JacobiSVD<Mat> s(a, opts);
  SvdResult out;
  out.singular_values = s.singularValues();
  if (with_factors) {
    out.u = s.matrixU();
    out.v = s.matrixV();
  }
  return out;
}

inline SvdResult svd(const RMat& a, bool with_factors = false) {
  return svd(Mat(a.cast<Cplx>()), with_factors);
}

/// Largest modulus over the spectrum.
template <typename MatT>
double spectral_radius(const MatT& a) {
  return eig(a, /*with_vectors=*/false).eigenvalues.cwiseAbs().maxCoeff();
}

/// Solve A x = b for nonsingular A; throws with a condition estimate otherwise.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
  detail::require_square(a, "solve");
  detail::require(a.rows() == b.size(), "solve: dimension mismatch");
  Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(a);
  if (!lu.isInvertible()) {
    const RVec sv = singular_values_via_gram(a);
    throw std::runtime_error(
        "solve: matrix numerically singular (sigma_max=" + std::to_string(sv(0)) +
        ", sigma_min=" + std::to_string(sv(sv.size() - 1)) + ")");
  }
  return lu.solve(b);
}

/// exp(A) by scaling-and-squaring with a Pade approximant (Eigen kernel).
template <typename D>
auto matrix_exponential(const Eigen::MatrixBase<D>& a) {
  detail::require_square(a, "matrix_exponential");
  detail::require(a.allFinite(), "matrix_exponential: non-finite entries");
  return a.derived().exp().eval();
}

/// ||A - B||_max convenience used by tests and reports.
template <typename DA, typename DB>
double max_abs_diff(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                  "max_abs_diff: dimension mismatch");
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

}  // namespace qsas
