#include "doctest.h"

#include <cmath>

#include "qsas/channels.hpp"
#include "qsas/rng.hpp"
#include "qsas/sas.hpp"

using namespace qsas;

namespace {
const auto qubit = std::make_shared<const GellMannBasis>(gellmann_basis(2));

Mat rotation_x(double angle) {
  return matrix_exponential(Mat(Cplx(0, -angle / 2) * pauli_x()));
}
}  // namespace

TEST_CASE("kraus application basics") {
  SplitMix64 rng(1);
  const DensityMatrix rho = random_density(2, rng);
  CHECK(max_abs_diff(identity_channel(2).apply(rho).matrix(), rho.matrix()) < 1e-15);

  // full depolarizing sends everything to the maximally mixed state
  const DensityMatrix out = depolarizing(1.0, 2).apply(rho);
  CHECK(max_abs_diff(out.matrix(), Mat(Mat::Identity(2, 2) / 2.0)) < 1e-14);

  CHECK_THROWS_AS(depolarizing(1.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing(-0.1, 2), std::invalid_argument);
}

TEST_CASE("kraus sets validate completeness and cardinality") {
  CHECK_THROWS_AS(KrausSet(2, {Mat(0.5 * Mat::Identity(2, 2))}), std::invalid_argument);
  std::vector<Mat> too_many(5, Mat(Mat::Identity(2, 2) / std::sqrt(5.0)));
  CHECK_THROWS_AS(KrausSet(2, std::move(too_many)), std::invalid_argument);
}

TEST_CASE("dephasing damps off-diagonals by exp(-g^2/2)") {
  const double g = 1.3;
  const DensityMatrix plus = maximal_coherent(2);
  const Mat out = dephasing(g).apply(plus).matrix();
  CHECK(std::abs(out(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(out(0, 1) - 0.5 * std::exp(-g * g / 2)) < 1e-14);

  CHECK(max_abs_diff(dephasing(0.0).apply(plus).matrix(), plus.matrix()) < 1e-15);

  // strong measurement projects onto the diagonal
  const Mat proj = dephasing(20.0).apply(plus).matrix();
  CHECK(std::abs(proj(0, 1)) < 1e-8);

  RMat expected = RMat::Identity(4, 4);
  expected(1, 1) = expected(2, 2) = std::exp(-g * g / 2);
  CHECK(max_abs_diff(superop_matrix(dephasing(g), *qubit), expected) < 1e-12);
}

TEST_CASE("cptp report: valid channels pass, the transpose map fails") {
  SplitMix64 rng(2);
  CHECK(is_cptp(depolarizing(0.3, 3)).pass());
  CHECK(is_cptp(random_channel(2, rng)).pass());

  const Channel transpose =
      Channel::from_action(2, [](const Mat& a) { return Mat(a.transpose()); });
  const CptpReport rep = is_cptp(transpose);
  CHECK_FALSE(rep.pass());
  CHECK(rep.choi_min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-10));

  // dropping a Kraus operator leaves a completeness defect
  KrausSet deph = dephasing(1.0).kraus().value();
  std::vector<Mat> dropped(deph.ops.begin(), deph.ops.end() - 1);
  const Channel broken = Channel::from_action(2, [ops = dropped](const Mat& a) {
    Mat out = Mat::Zero(2, 2);
    for (const Mat& k : ops) out += k * a * k.adjoint();
    return out;
  });
  CHECK(is_cptp(broken).trace_defect > 1e-3);
  CHECK_THROWS_AS(KrausSet(2, std::move(dropped)), std::invalid_argument);
}

TEST_CASE("choi matrices") {
  // identity channel: d times the maximally entangled projector
  const Mat c = choi(identity_channel(2));
  Vec omega = Vec::Zero(4);
  omega(0) = omega(3) = 1.0;  // |00> + |11>
  CHECK(max_abs_diff(c, Mat(omega * omega.adjoint())) < 1e-14);

  // depolarizing Choi spectrum: {d(1-l) + l/d, l/d, ...}
  const double lambda = 0.3;
  const Spectrum s = eig(choi(depolarizing(lambda, 2)));
  CHECK(std::abs(s.eigenvalues(0) - (2 * (1 - lambda) + lambda / 2)) < 1e-12);
  for (int k = 1; k < 4; ++k)
    CHECK(std::abs(s.eigenvalues(k) - lambda / 2) < 1e-12);
  CHECK(min_eigenvalue(choi(depolarizing(lambda, 2))) > -1e-12);
}

TEST_CASE("kraus extraction from choi reproduces the channel") {
  SplitMix64 rng(4);
  for (int d : {2, 3}) {
    const Channel t = random_channel(d, rng);
    const KrausSet k = kraus_from_choi(choi(t));
    CHECK(static_cast<int>(k.ops.size()) <= d * d);
    const Channel rebuilt = Channel::from_kraus(k);
    for (int trial = 0; trial < 5; ++trial) {
      const Mat rho = random_density(d, rng).matrix();
      CHECK(max_abs_diff(rebuilt(rho), t(rho)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(
      kraus_from_choi(choi(Channel::from_action(
          2, [](const Mat& a) { return Mat(a.transpose()); }))),
      std::invalid_argument);
}

TEST_CASE("unitary channels and composition") {
  Mat not_unitary(2, 2);
  not_unitary << 1, 0, 0, 2;
  CHECK_THROWS_AS(unitary_channel(not_unitary), std::invalid_argument);

  SplitMix64 rng(6);
  const Channel t = random_channel(2, rng);
  const DensityMatrix rho = random_density(2, rng);
  CHECK(max_abs_diff(compose(identity_channel(2), t).apply(rho).matrix(),
                     t.apply(rho).matrix()) < 1e-14);

  // superoperators multiply in application order
  const Channel a = random_channel(2, rng), b = random_channel(2, rng);
  const RMat lhs = superop_matrix(compose(a, b), *qubit);
  const RMat rhs = superop_matrix(a, *qubit) * superop_matrix(b, *qubit);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("unitary followed by unital noise keeps I/d fixed") {
  const Channel u = unitary_channel(rotation_x(1.1));
  const Channel t = compose(depolarizing(0.4, 2), compose(dephasing(0.8), u));
  const Mat fixed = t(Mat::Identity(2, 2) / 2.0);
  CHECK(max_abs_diff(fixed, Mat(Mat::Identity(2, 2) / 2.0)) < 1e-14);
  CHECK(is_cptp(t).pass());
}

TEST_CASE("non-expansiveness and trace preservation on random channels") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = (trial % 2) ? 3 : 2;
    const Channel t = random_channel(d, rng);
    const Mat r1 = random_density(d, rng).matrix();
    const Mat r2 = random_density(d, rng).matrix();
    const double before = schatten_norm(Mat(r1 - r2), 1.0);
    const double after = schatten_norm(Mat(t(r1) - t(r2)), 1.0);
    CHECK(after <= before + 1e-10);
    CHECK(std::abs(t(r1).trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(t(r1).trace().imag()) < 1e-13);
  }
}

TEST_CASE("depolarizing weights telescope to one") {
  SplitMix64 rng(10);
  const int n = 200;
  std::vector<double> lambdas(n);
  for (double& l : lambdas) l = rng.uniform(0.1, 0.9);
  double sum = 0.0, partial_product = 1.0, full_product = 1.0;
  for (int i = 0; i < n; ++i) {
    sum += lambdas[i] * partial_product;
    partial_product *= 1.0 - lambdas[i];
    full_product *= 1.0 - lambdas[i];
  }
  CHECK(std::abs(sum - (1.0 - full_product)) < 1e-12);
}

TEST_CASE("blend: validation, limit, and the closed-form filter") {
  SplitMix64 rng(12);
  const DensityMatrix sigma = random_density(2, rng);
  ParamChannel unitaries(2, unit_interval(), [](const RVec& z) {
    return unitary_channel(rotation_x(3.14159 * z(0)));
  });

  CHECK_THROWS_AS(blend(unitaries, sigma, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(blend(unitaries, sigma, 1.0), std::invalid_argument);

  // eps -> 1: the filter collapses onto sigma
  {
    ParamChannel nearly = blend(unitaries, sigma, 0.999);
    Mat rho = random_density(2, rng).matrix();
    std::vector<RVec> inputs(40, RVec::Constant(1, 0.37));
    for (const RVec& z : inputs) rho = nearly.at(z)(rho);
    CHECK(schatten_norm(Mat(rho - sigma.matrix()), 1.0) < 1e-2);
  }

  // eps = 1/2: iteration matches the truncated closed-form sum
  {
    const double eps = 0.5;
    ParamChannel blended = blend(unitaries, sigma, eps);
    const int steps = 60;
    std::vector<RVec> inputs(steps);
    for (RVec& z : inputs) z = RVec::Constant(1, rng.uniform());

    Mat rho = random_density(2, rng).matrix();
    for (const RVec& z : inputs) rho = blended.at(z)(rho);

    // closed form: eps sigma + eps sum_j (1-eps)^j T_{z_t} ... T_{z_{t+1-j}} (sigma)
    Mat expected = eps * sigma.matrix();
    double weight = eps;
    for (int j = 1; j < steps; ++j) {
      weight *= 1.0 - eps;
      Mat term = sigma.matrix();
      for (int l = steps - j; l < steps; ++l)
        term = unitaries.at(inputs[static_cast<size_t>(l)])(term);
      expected += weight * term;
    }
    CHECK(max_abs_diff(rho, expected) < 1e-10);
  }

  // blends of CPTP maps stay CPTP
  for (int trial = 0; trial < 5; ++trial) {
    ParamChannel base = random_param_channel(2, rng);
    ParamChannel blended = blend(base, random_density(2, rng), 0.3);
    const RVec z = RVec::Constant(1, rng.uniform());
    const CptpReport rep = is_cptp(blended.at(z));
    CHECK(rep.pass());
  }
}

TEST_CASE("param channels reject inputs outside the domain") {
  SplitMix64 rng(14);
  ParamChannel pc = random_param_channel(2, rng);
  CHECK_THROWS_AS(pc.at(RVec::Constant(1, 1.5)), std::domain_error);
  CHECK_NOTHROW(pc.at(RVec::Constant(1, 1.0)));
}
