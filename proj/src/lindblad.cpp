#include "qsas/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsas {

RMat liouvillian_superop(const LindbladModel& model, const RVec& z,
                         const GellMannBasis& basis) {
  const int d = model.dim;
  detail::require(basis.dim == d, "liouvillian_superop: basis dimension mismatch");
  const Mat h = model.hamiltonian ? model.hamiltonian(z) : Mat(Mat::Zero(d, d));
  detail::require(h.rows() == d && h.cols() == d,
                  "liouvillian_superop: Hamiltonian dimension mismatch");
  if (!is_hermitian(h))
    throw std::invalid_argument("liouvillian_superop: H(z) not Hermitian");
  for (const auto& [l, rate] : model.jumps) {
    detail::require(rate >= 0.0, "liouvillian_superop: negative jump rate");
    detail::require(l.rows() == d && l.cols() == d,
                    "liouvillian_superop: jump operator dimension mismatch");
  }

  const Cplx minus_i(0, -1);
  const int n = basis.size();
  RMat out(n, n);
  for (int j = 0; j < n; ++j) {
    const Mat& a = basis[j];
    Mat da = minus_i * (h * a - a * h);
    for (const auto& [l, rate] : model.jumps) {
      const Mat ldl = l.adjoint() * l;
      da += rate * (l * a * l.adjoint() - 0.5 * (ldl * a + a * ldl));
    }
    for (int i = 0; i < n; ++i) {
      const Cplx v = (basis[i].adjoint() * da).trace();
      if (std::abs(v.imag()) > tol::structural)
        throw std::runtime_error("liouvillian_superop: imaginary residue " +
                                 std::to_string(v.imag()));
      out(i, j) = v.real();
    }
  }
  return out;
}

Propagator propagator(const LindbladModel& model, const RVec& z,
                      const GellMannBasis& basis) {
  return propagator(model, z, basis, model.dt);
}

Propagator propagator(const LindbladModel& model, const RVec& z,
                      const GellMannBasis& basis, double dt) {
  detail::require(dt > 0.0, "propagator: dt must be positive");
  const RMat gen = liouvillian_superop(model, z, basis);
  RMat t = matrix_exponential(RMat(gen * dt));
  if (!t.allFinite())
    throw std::runtime_error("propagator: matrix exponential returned non-finite entries");
  RVec first = t.row(0);
  first(0) -= 1.0;
  if (first.cwiseAbs().maxCoeff() > tol::structural)
    throw std::runtime_error("propagator: trace preservation violated in first row");
  return Propagator{std::move(t), Provenance::numeric_expm};
}

HyperbolicPair cosh_sinch(double s, double c) {
  constexpr double band = 1e-8;
  if (s > band) {
    const double r = std::sqrt(s);
    return {std::cosh(c * r), std::sinh(c * r) / r};
  }
  if (s < -band) {
    const double r = std::sqrt(-s);
    return {std::cos(c * r), std::sin(c * r) / r};
  }
  const double x = c * c * s;  // second-order limits around the removable point
  return {1.0 + x / 2.0 + x * x / 24.0, c * (1.0 + x / 6.0 + x * x / 120.0)};
}

Propagator example_unital_dephasing(double gamma, double h, double dt) {
  detail::require(gamma >= 0.0, "example_unital_dephasing: gamma must be >= 0");
  detail::require(dt > 0.0, "example_unital_dephasing: dt must be positive");
  const auto [ch, sh] = cosh_sinch(gamma * gamma - h * h, dt);
  const double e = std::exp(-gamma * dt);
  RMat t = RMat::Identity(4, 4);
  t(1, 1) = std::exp(-2.0 * gamma * dt);
  t(2, 2) = e * (ch - gamma * sh);
  t(2, 3) = h * e * sh;
  t(3, 2) = -t(2, 3);
  t(3, 3) = e * (ch + gamma * sh);
  return Propagator{std::move(t), Provenance::analytic_family};
}

Propagator example_bad_zfield(double gamma, double h, double dt) {
  detail::require(gamma > 0.0, "example_bad_zfield: gamma must be positive");
  detail::require(dt > 0.0, "example_bad_zfield: dt must be positive");
  const double e2 = std::exp(-gamma * dt / 2.0);
  const double e = std::exp(-gamma * dt);
  const double co = std::cos(h * dt), si = std::sin(h * dt);
  RMat t = RMat::Identity(4, 4);
  t(1, 1) = e2 * co;
  t(1, 2) = e2 * si;
  t(2, 1) = -e2 * si;
  t(2, 2) = e2 * co;
  t(3, 0) = e - 1.0;
  t(3, 3) = e;
  return Propagator{std::move(t), Provenance::analytic_family};
}

Propagator example_good_xfield(double gamma, double h, double dt) {
  detail::require(gamma > 0.0, "example_good_xfield: gamma must be positive");
  detail::require(dt > 0.0, "example_good_xfield: dt must be positive");
  const auto [ch, sh] = cosh_sinch(gamma * gamma - 16.0 * h * h, dt / 4.0);
  const double e = std::exp(-3.0 * gamma * dt / 4.0);
  const double w = gamma * gamma + 2.0 * h * h;
  RMat t = RMat::Identity(4, 4);
  t(1, 1) = std::exp(-gamma * dt / 2.0);
  t(2, 2) = e * (ch + gamma * sh);
  t(2, 3) = 4.0 * h * e * sh;
  t(3, 2) = -t(2, 3);
  t(3, 3) = e * (ch - gamma * sh);
  t(2, 0) = 2.0 * gamma * h / w * (-1.0 + e * (ch + 3.0 * gamma * sh));
  t(3, 0) = gamma / w *
            (-gamma + e * (gamma * ch - (gamma * gamma + 8.0 * h * h) * sh));
  return Propagator{std::move(t), Provenance::analytic_family};
}

Propagator measurement_composed(double gamma, double h, double dt, double g) {
  detail::require(g >= 0.0, "measurement_composed: g must be >= 0");
  Propagator base = example_good_xfield(gamma, h, dt);
  const double keep = std::exp(-g * g / 2.0);
  RMat deph = RMat::Identity(4, 4);
  deph(1, 1) = keep;
  deph(2, 2) = keep;
  RMat t = deph * base.superop;
  return Propagator{std::move(t), Provenance::analytic_family};
}

Vec example_ing_eigenvalues(double gamma, double h, double dt) {
  const Cplx s = std::sqrt(Cplx(gamma * gamma - h * h, 0.0));
  Vec v(4);
  v(0) = 1.0;
  v(1) = std::exp(-2.0 * gamma * dt);
  v(2) = std::exp(-(gamma + s) * dt);
  v(3) = std::exp(-(gamma - s) * dt);
  return v;
}

Vec example_bad_eigenvalues(double gamma, double h, double dt) {
  Vec v(4);
  v(0) = 1.0;
  v(1) = std::exp(-gamma * dt);
  v(2) = std::exp(Cplx(-gamma * dt / 2.0, -h * dt));
  v(3) = std::exp(Cplx(-gamma * dt / 2.0, h * dt));
  return v;
}

Mat good_fixed_point(double gamma, double h) {
  const double w = gamma * gamma + 2.0 * h * h;
  detail::require(w > 0.0, "good_fixed_point: gamma and h cannot both vanish");
  Mat rho(2, 2);
  rho(0, 0) = h * h / w;
  rho(0, 1) = Cplx(0, gamma * h / w);
  rho(1, 0) = Cplx(0, -gamma * h / w);
  rho(1, 1) = (gamma * gamma + h * h) / w;
  return rho;
}

Mat composed_fixed_point(double gamma, double h, double dt, double g) {
  const double w = gamma * gamma + 2.0 * h * h;
  detail::require(gamma > 0.0, "composed_fixed_point: gamma must be positive");
  const auto [ch, sh] = cosh_sinch(gamma * gamma - 16.0 * h * h, dt / 4.0);
  const double b = g * g / 4.0;
  const double u = std::exp(3.0 * gamma * dt / 4.0);
  // Common denominator; the f2 numerator uses the bare hyperbolic pair.
  const double den =
      std::cosh((g * g + 3.0 * gamma * dt) / 4.0) - std::cosh(b) * ch +
      gamma * std::sinh(b) * sh;
  const double f1 = 4.0 * gamma * h * h * std::sinh(b) * sh / den;
  const double f2 = std::sinh(b) * (u - ch + gamma * sh) / den;
  Mat rho(2, 2);
  rho(0, 0) = (h * h - f1) / w;
  rho(0, 1) = Cplx(0, gamma * h * (1.0 - f2) / w);
  rho(1, 0) = Cplx(0, -gamma * h * (1.0 - f2) / w);
  rho(1, 1) = (gamma * gamma + h * h + f1) / w;
  return rho;
}

namespace {
LindbladModel field_model(double gamma, double field, double dt, Mat axis, Mat jump) {
  LindbladModel m;
  m.dim = 2;
  // Negative field sign: positive h then yields the clockwise transverse
  // rotation of the analytic entry tables.
  m.hamiltonian = [field, axis = std::move(axis)](const RVec& z) {
    return Mat(-0.5 * field * z(0) * axis);
  };
  m.jumps.emplace_back(std::move(jump), gamma);
  m.dt = dt;
  return m;
}
}  // namespace

LindbladModel model_unital_dephasing(double gamma, double field, double dt) {
  return field_model(gamma, field, dt, pauli_x(), pauli_z());
}

LindbladModel model_bad_zfield(double gamma, double field, double dt) {
  return field_model(gamma, field, dt, pauli_z(), sigma_minus());
}

LindbladModel model_good_xfield(double gamma, double field, double dt) {
  return field_model(gamma, field, dt, pauli_x(), sigma_minus());
}

}  // namespace qsas
