#pragma once

// Liouvillian superoperators for Markovian master equations, their
// exponentiated CPTP propagators, and three analytic single-qubit families
// (tunable dephasing, z-field dissipation, x-field dissipation) together
// with the measurement-dephasing composition. The analytic entry tables are
// the golden references; the numeric expm route must reproduce them.

#include <functional>
#include <utility>
#include <vector>

#include "qsas/basis.hpp"
#include "qsas/channels.hpp"
#include "qsas/types.hpp"

namespace qsas {

/// d rho/dt = -i [H(z), rho] + sum_k gamma_k (L rho L^dag - {L^dag L, rho}/2),
/// with H constant between input injections.
struct LindbladModel {
  int dim = 0;
  std::function<Mat(const RVec&)> hamiltonian;   // angular frequency units
  std::vector<std::pair<Mat, double>> jumps;     // (L_k, gamma_k >= 0)
  double dt = 1.0;                               // step duration
};

/// Generator matrix in the Gell-Mann basis, entries tr(Bi L(Bj)); the first
/// row vanishes (the generator annihilates the trace).
RMat liouvillian_superop(const LindbladModel& model, const RVec& z,
                         const GellMannBasis& basis);

enum class Provenance { numeric_expm, analytic_family };

struct Propagator {
  RMat superop;  // Gell-Mann coordinates; first row (1, 0, ..., 0)
  Provenance provenance = Provenance::numeric_expm;
};

/// exp(L dt) with the model's own step duration, or an explicit one.
Propagator propagator(const LindbladModel& model, const RVec& z,
                      const GellMannBasis& basis);
Propagator propagator(const LindbladModel& model, const RVec& z,
                      const GellMannBasis& basis, double dt);

/// cosh(c sqrt(s)) and sinh(c sqrt(s))/sqrt(s) continued through s <= 0;
/// a Taylor branch covers the removable point |s| < 1e-8.
struct HyperbolicPair {
  double cosh_value;
  double sinch_value;
};
HyperbolicPair cosh_sinch(double s, double c);

// --- Analytic single-qubit families (Pauli-ordered Gell-Mann basis) ---
//
// All three integrate H = (h/2) sigma^axis between injections with a single
// jump operator, with the field sign fixed so that a positive h rotates the
// plane transverse to the axis clockwise (x toward -y for a z field); the
// matching model_* builders below carry the same convention.

/// H along x, L = sigma_z (tunable local dephasing). Unital; fixed point
/// I/2; mixing iff h != 0.
Propagator example_unital_dephasing(double gamma, double h, double dt);

/// H along z, L = sigma_minus. Input-independent pure fixed point
/// diag(0, 1); singular values {e^{-gamma dt}, e^{-gamma dt/2} (twice)}.
Propagator example_bad_zfield(double gamma, double h, double dt);

/// H along x, L = sigma_minus. Input-dependent full-rank fixed point;
/// contractive away from gamma = 0.
Propagator example_good_xfield(double gamma, double h, double dt);

/// Dephasing of strength g composed after the x-field family:
/// T' = E_deph * T with E_deph = diag(1, e^{-g^2/2}, e^{-g^2/2}, 1).
Propagator measurement_composed(double gamma, double h, double dt, double g);

/// Closed-form spectra of the propagators.
Vec example_ing_eigenvalues(double gamma, double h, double dt);
Vec example_bad_eigenvalues(double gamma, double h, double dt);

/// Fixed points: rho* = (h^2, i gamma h; -i gamma h, gamma^2 + h^2) / W for
/// the x-field family (W = gamma^2 + 2 h^2), and its dephased deformation
/// with weights f1, f2 for the measurement composition.
Mat good_fixed_point(double gamma, double h);
Mat composed_fixed_point(double gamma, double h, double dt, double g);

/// Lindblad models matching the analytic families; the input enters as
/// h = field * z(0).
LindbladModel model_unital_dephasing(double gamma, double field, double dt);
LindbladModel model_bad_zfield(double gamma, double field, double dt);
LindbladModel model_good_xfield(double gamma, double field, double dt);

}  // namespace qsas
