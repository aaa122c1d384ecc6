#include "qsas/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsas {

KrausSet::KrausSet(int dim, std::vector<Mat> operators, double tolerance)
    : dim(dim), ops(std::move(operators)) {
  detail::require(dim >= 1, "KrausSet: dimension must be positive");
  detail::require(!ops.empty(), "KrausSet: needs at least one operator");
  detail::require(ops.size() <= static_cast<size_t>(dim) * dim,
                  "KrausSet: more than d^2 operators");
  for (const Mat& k : ops)
    detail::require(k.rows() == dim && k.cols() == dim,
                    "KrausSet: operator dimension mismatch");
  const double defect = completeness_defect();
  if (defect > tolerance)
    throw std::invalid_argument("KrausSet: completeness defect " +
                                std::to_string(defect));
}

double KrausSet::completeness_defect() const {
  Mat acc = Mat::Zero(dim, dim);
  for (const Mat& k : ops) acc += k.adjoint() * k;
  return (acc - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

Channel Channel::from_kraus(KrausSet kraus) {
  const int d = kraus.dim;
  auto ops = kraus.ops;
  auto action = [ops, d](const Mat& a) {
    detail::require(a.rows() == d && a.cols() == d, "Channel: dimension mismatch");
    Mat out = Mat::Zero(d, d);
    for (const Mat& k : ops) out += k * a * k.adjoint();
    return out;
  };
  return Channel(d, std::move(action), std::move(kraus));
}

Channel Channel::from_action(int dim, std::function<Mat(const Mat&)> action) {
  return Channel(dim, std::move(action), std::nullopt);
}

Channel Channel::from_superop(RMat superop, std::shared_ptr<const GellMannBasis> basis) {
  const int d = basis->dim;
  detail::require(superop.rows() == d * d && superop.cols() == d * d,
                  "Channel::from_superop: dimension mismatch");
  auto action = [superop = std::move(superop), basis](const Mat& a) {
    return from_coords(superop.cast<Cplx>() * to_coords(a, *basis), *basis);
  };
  return Channel(d, std::move(action), std::nullopt);
}

Mat Channel::operator()(const Mat& a) const { return action_(a); }

DensityMatrix Channel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(action_(rho.matrix()));
}

KrausSet Channel::kraus_or_extract() const {
  if (kraus_) return *kraus_;
  return kraus_from_choi(choi(*this));
}

Mat choi(const Channel& t) {
  const int d = t.dim();
  Mat c = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat e = Mat::Zero(d, d);
      e(i, j) = 1.0;
      c.block(i * d, j * d, d, d) = t(e);
    }
  return c;
}

CptpReport is_cptp(const Channel& t) {
  const int d = t.dim();
  const Mat c = choi(t);
  CptpReport report;
  // Partial trace over the output factor: equals I iff trace preserving.
  Mat tr_out = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      tr_out(i, j) = c.block(i * d, j * d, d, d).trace();
  report.trace_defect = (tr_out - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  report.completeness_defect =
      t.kraus() ? t.kraus()->completeness_defect() : report.trace_defect;
  report.choi_min_eigenvalue = min_eigenvalue((c + c.adjoint()) / 2.0);
  return report;
}

KrausSet kraus_from_choi(const Mat& choi_matrix, double cutoff) {
  const int dd = static_cast<int>(choi_matrix.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(dd))));
  detail::require(d * d == dd && choi_matrix.cols() == dd,
                  "kraus_from_choi: need a d^2 x d^2 matrix");
  const Mat herm = (choi_matrix + choi_matrix.adjoint()) / 2.0;
  if ((choi_matrix - herm).cwiseAbs().maxCoeff() > tol::structural)
    throw std::invalid_argument("kraus_from_choi: Choi matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::structural)
    throw std::invalid_argument("kraus_from_choi: Choi min eigenvalue " +
                                std::to_string(min_eig) + ", map is not CP");
  std::vector<Mat> ops;
  for (int k = dd - 1; k >= 0; --k) {  // descending eigenvalues
    const double lam = es.eigenvalues()(k);
    if (lam <= cutoff) continue;
    Mat op(d, d);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < d; ++a) op(a, i) = es.eigenvectors()(i * d + a, k);
    ops.push_back(std::sqrt(lam) * op);
  }
  return KrausSet(d, std::move(ops));
}

Channel identity_channel(int d) {
  return Channel::from_kraus(KrausSet(d, {Mat::Identity(d, d)}));
}

Channel depolarizing(double lambda, int d) {
  detail::require(lambda >= 0.0 && lambda <= 1.0,
                  "depolarizing: lambda must be in [0, 1]");
  return Channel::from_action(d, [lambda, d](const Mat& a) {
    return Mat((1.0 - lambda) * a +
               lambda * a.trace() / static_cast<double>(d) * Mat::Identity(d, d));
  });
}

Channel dephasing(double g) {
  detail::require(g >= 0.0, "dephasing: g must be >= 0");
  const double keep = std::exp(-g * g / 2.0);
  std::vector<Mat> ops;
  Mat k0 = std::sqrt(keep) * Mat::Identity(2, 2);
  Mat k1 = Mat::Zero(2, 2), k2 = Mat::Zero(2, 2);
  k1(0, 0) = std::sqrt(1.0 - keep);
  k2(1, 1) = std::sqrt(1.0 - keep);
  ops.push_back(std::move(k0));
  if (g > 0.0) {
    ops.push_back(std::move(k1));
    ops.push_back(std::move(k2));
  }
  return Channel::from_kraus(KrausSet(2, std::move(ops)));
}

Channel unitary_channel(const Mat& u, double tolerance) {
  detail::require_square(u, "unitary_channel");
  const double defect =
      (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > tolerance)
    throw std::invalid_argument("unitary_channel: U not unitary, defect " +
                                std::to_string(defect));
  return Channel::from_kraus(KrausSet(static_cast<int>(u.rows()), {u}));
}

Channel compose(const Channel& second, const Channel& first) {
  detail::require(second.dim() == first.dim(), "compose: dimension mismatch");
  return Channel::from_action(
      first.dim(), [second, first](const Mat& a) { return second(first(a)); });
}

bool InputDomain::contains(const RVec& z, double slack) const {
  if (z.size() != lo.size()) return false;
  for (int i = 0; i < z.size(); ++i)
    if (z(i) < lo(i) - slack || z(i) > hi(i) + slack) return false;
  return true;
}

InputDomain unit_interval() {
  InputDomain d;
  d.lo = RVec::Zero(1);
  d.hi = RVec::Ones(1);
  return d;
}

Channel ParamChannel::at(const RVec& z) const {
  if (!domain_.contains(z, 1e-12))
    throw std::domain_error("ParamChannel: input outside the declared domain");
  return eval_(z);
}

ParamChannel blend(ParamChannel base, DensityMatrix sigma, double eps) {
  detail::require(eps > 0.0 && eps < 1.0, "blend: eps must be in (0, 1)");
  detail::require(base.dim() == sigma.dim(), "blend: dimension mismatch");
  const int d = base.dim();
  auto dom = base.domain();
  auto eval = [base = std::move(base), sigma = std::move(sigma), eps, d](const RVec& z) {
    Channel inner = base.at(z);
    return Channel::from_action(d, [inner, sigma, eps](const Mat& a) {
      return Mat((1.0 - eps) * inner(a) + eps * a.trace() * sigma.matrix());
    });
  };
  return ParamChannel(d, std::move(dom), std::move(eval));
}

DensityMatrix random_pure_state(int d, SplitMix64& rng) {
  Vec psi(d);
  for (int i = 0; i < d; ++i) psi(i) = Cplx(rng.normal(), rng.normal());
  psi /= psi.norm();
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix random_density(int d, SplitMix64& rng) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Cplx(rng.normal(), rng.normal());
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(std::move(rho));
}

Channel random_channel(int d, SplitMix64& rng, int n_kraus) {
  if (n_kraus <= 0) n_kraus = d * d;
  detail::require(n_kraus <= d * d, "random_channel: more than d^2 operators");
  std::vector<Mat> blocks;
  Mat s = Mat::Zero(d, d);
  for (int k = 0; k < n_kraus; ++k) {
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = Cplx(rng.normal(), rng.normal());
    s += g.adjoint() * g;
    blocks.push_back(std::move(g));
  }
  // Normalize: K_i = G_i S^{-1/2} gives sum K^dagger K = I.
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  Mat inv_sqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().adjoint();
  std::vector<Mat> ops;
  ops.reserve(blocks.size());
  for (Mat& g : blocks) ops.push_back(g * inv_sqrt);
  return Channel::from_kraus(KrausSet(d, std::move(ops)));
}

ParamChannel random_param_channel(int d, SplitMix64& rng) {
  Channel a = random_channel(d, rng);
  Channel b = random_channel(d, rng);
  return ParamChannel(d, unit_interval(), [a, b, d](const RVec& z) {
    const double w = z(0);
    return Channel::from_action(
        d, [a, b, w](const Mat& m) { return Mat((1.0 - w) * a(m) + w * b(m)); });
  });
}

}  // namespace qsas
