#pragma once

// Generalized Gell-Mann bases of Hermitian operators, coordinate maps
// between operators and vectors, and the Bloch-vector view of states.

#include <memory>
#include <vector>

#include "qsas/numerics.hpp"
#include "qsas/types.hpp"

namespace qsas {

/// Orthonormal Hermitian basis of d x d operators under the Hilbert-Schmidt
/// inner product tr(Bi^dagger Bj) = delta_ij. Element 0 is I/sqrt(d); the
/// remaining d^2-1 elements are traceless, ordered as: symmetric pair
/// generators (j<k lexicographic), antisymmetric pair generators (same
/// order), then diagonal generators. For d=2 this is {I, sx, sy, sz}/sqrt(2).
struct GellMannBasis {
  int dim = 0;
  std::vector<Mat> elements;

  int size() const { return static_cast<int>(elements.size()); }
  const Mat& operator[](int i) const { return elements[static_cast<size_t>(i)]; }
};

GellMannBasis gellmann_basis(int d);

/// All n-fold tensor products of the given basis elements, lexicographic in
/// the factor indices so the all-identity product comes first. Guards
/// against total dimension beyond 64.
GellMannBasis tensor_basis(const GellMannBasis& basis, int n_factors);

/// Hilbert-Schmidt Gram matrix; equals the identity for a valid basis.
RMat gram_matrix(const GellMannBasis& basis);

/// Coordinates a_i = tr(Bi^dagger A) and the inverse map A = sum_i a_i Bi.
Vec to_coords(const Mat& a, const GellMannBasis& basis);
Mat from_coords(const Vec& coords, const GellMannBasis& basis);

/// Real coordinates for Hermitian operators; throws if the imaginary
/// residue exceeds the tolerance.
RVec to_real_coords(const Mat& a, const GellMannBasis& basis,
                    double tolerance = tol::basis);

/// Hermitian, positive semidefinite, unit-trace matrix. The constructor
/// validates all three (and the Frobenius bound ||rho||_2 <= 1).
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat rho, double tolerance = tol::structural);
  const Mat& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  Mat rho_;
};

DensityMatrix maximally_mixed(int d);
/// The maximal coherent state (1/d) sum_{ij} |i><j|.
DensityMatrix maximal_coherent(int d);

/// Bloch vector: real coordinates of a state with respect to the traceless
/// basis elements (length d^2-1). The full coordinate vector of a density
/// matrix is (1/sqrt(d), x^T)^T.
using BlochVector = RVec;

BlochVector density_to_bloch(const DensityMatrix& rho, const GellMannBasis& basis);

/// Rejects vectors whose reconstruction fails the state invariants (for
/// d > 2 not every vector in the unit ball is a state).
DensityMatrix bloch_to_density(const BlochVector& x, const GellMannBasis& basis);

/// Reporting convention: generator expectations tr(sqrt(d) Bi rho), i.e.
/// Pauli expectations <sigma_a> for qubits. Uniform rescaling by sqrt(d).
RVec bloch_to_pauli(const BlochVector& x, int d);
BlochVector pauli_to_bloch(const RVec& s, int d);

/// (<sx>, <sy>, <sz>) for a qubit state.
RVec pauli_expectations(const DensityMatrix& rho);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
/// Lowering operator |1><0| (decays toward <sz> = -1).
Mat sigma_minus();

}  // namespace qsas
