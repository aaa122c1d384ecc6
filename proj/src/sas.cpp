#include "qsas/sas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsas {

RMat superop_matrix(const Channel& t, const GellMannBasis& basis,
                    double imag_tolerance) {
  detail::require(t.dim() == basis.dim, "superop_matrix: dimension mismatch");
  const int n = basis.size();
  RMat out(n, n);
  for (int j = 0; j < n; ++j) {
    const Vec col = to_coords(t(basis[j]), basis);
    const double resid = col.imag().cwiseAbs().maxCoeff();
    if (resid > imag_tolerance)
      throw std::runtime_error("superop_matrix: imaginary residue " +
                               std::to_string(resid) +
                               " (map does not preserve Hermiticity?)");
    out.col(j) = col.real();
  }
  return out;
}

SasBlocks sas_decompose(const RMat& superop, double tolerance) {
  const int n = static_cast<int>(superop.rows());
  detail::require(superop.cols() == n, "sas_decompose: matrix must be square");
  const int d = static_cast<int>(std::lround(std::sqrt(double(n))));
  detail::require(d * d == n, "sas_decompose: size must be a perfect square");
  RVec first = superop.row(0);
  first(0) -= 1.0;
  const double defect = first.cwiseAbs().maxCoeff();
  if (defect > tolerance)
    throw std::invalid_argument(
        "sas_decompose: first row deviates from (1, 0, ...) by " +
        std::to_string(defect) + "; map is not trace preserving");
  SasBlocks blocks;
  blocks.p = superop.block(1, 1, n - 1, n - 1);
  blocks.q = superop.block(1, 0, n - 1, 1) / std::sqrt(static_cast<double>(d));
  return blocks;
}

RMat sas_reassemble(const SasBlocks& blocks) {
  const int m = static_cast<int>(blocks.p.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(m + 1))));
  detail::require(d * d == m + 1, "sas_reassemble: block size mismatch");
  RMat out = RMat::Zero(m + 1, m + 1);
  out(0, 0) = 1.0;
  out.block(1, 0, m, 1) = blocks.q * std::sqrt(static_cast<double>(d));
  out.block(1, 1, m, m) = blocks.p;
  return out;
}

SASModel make_sas(const ParamChannel& channel,
                  std::shared_ptr<const GellMannBasis> basis) {
  detail::require(channel.dim() == basis->dim, "make_sas: dimension mismatch");
  SASModel model;
  model.dim = channel.dim();
  model.domain = channel.domain();
  model.superop = [channel, basis](const RVec& z) {
    return superop_matrix(channel.at(z), *basis);
  };
  return model;
}

BlochVector sas_step(const SASModel& model, const BlochVector& x, const RVec& z) {
  if (!model.domain.contains(z, 1e-12))
    throw std::domain_error("sas_step: input outside the declared domain");
  detail::require(x.allFinite(), "sas_step: non-finite state");
  const SasBlocks b = model.pq(z);
  return b.p * x + b.q;
}

std::vector<BlochVector> iterate_sas(const SASModel& model, BlochVector x0,
                                     const std::vector<RVec>& inputs) {
  std::vector<BlochVector> traj;
  traj.reserve(inputs.size());
  BlochVector x = std::move(x0);
  for (const RVec& z : inputs) {
    x = sas_step(model, x, z);
    traj.push_back(x);
  }
  return traj;
}

std::vector<DensityMatrix> iterate_density(const ParamChannel& channel,
                                           const DensityMatrix& rho0,
                                           const std::vector<RVec>& inputs) {
  std::vector<DensityMatrix> traj;
  traj.reserve(inputs.size());
  Mat rho = rho0.matrix();
  for (const RVec& z : inputs) {
    rho = channel.at(z)(rho);
    rho = (rho + rho.adjoint()).eval() / 2.0;
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > tol::convergence) rho /= tr;
    traj.emplace_back(rho);  // validates; PSD violations are errors, not repairs
  }
  return traj;
}

Lattice make_lattice(const InputDomain& domain, int per_axis, int n_random,
                     std::uint64_t seed) {
  detail::require(per_axis >= 2, "make_lattice: need at least 2 points per axis");
  detail::require(n_random >= 0, "make_lattice: negative random point count");
  const int n = domain.dim();
  double total = std::pow(static_cast<double>(per_axis), n);
  detail::require(total <= 250000.0, "make_lattice: grid too large");

  Lattice lattice;
  const int grid_points = static_cast<int>(total);
  lattice.points.reserve(static_cast<size_t>(grid_points + n_random));
  for (int m = 0; m < grid_points; ++m) {
    RVec z(n);
    int rem = m;
    for (int a = 0; a < n; ++a) {
      const int i = rem % per_axis;
      rem /= per_axis;
      z(a) = domain.lo(a) + (domain.hi(a) - domain.lo(a)) * i / (per_axis - 1);
    }
    lattice.points.push_back(std::move(z));
  }
  SplitMix64 rng(seed);
  for (int m = 0; m < n_random; ++m) {
    RVec z(n);
    for (int a = 0; a < n; ++a) z(a) = rng.uniform(domain.lo(a), domain.hi(a));
    lattice.points.push_back(std::move(z));
  }
  std::ostringstream desc;
  desc << "uniform " << per_axis << "^" << n << " + " << n_random
       << " random interior points, seed " << seed << ", box [";
  for (int a = 0; a < n; ++a)
    desc << (a ? " x [" : "") << domain.lo(a) << ", " << domain.hi(a) << "]";
  lattice.descriptor = desc.str();
  return lattice;
}

const char* to_string(ESPReport::Verdict v) {
  switch (v) {
    case ESPReport::Verdict::certified_contractive: return "certified_contractive";
    case ESPReport::Verdict::necessary_condition_failed:
      return "necessary_condition_failed";
    case ESPReport::Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Diagonal-similarity scale grid for small traceless blocks.
std::vector<RVec> scale_candidates(int m) {
  static const double levels[] = {0.25, 1.0, 4.0};
  std::vector<RVec> out;
  if (m > 3) return out;  // exhaustive grid only pays off for qubits
  int combos = 1;
  for (int i = 0; i < m; ++i) combos *= 3;
  for (int c = 0; c < combos; ++c) {
    RVec s(m);
    int rem = c;
    for (int i = 0; i < m; ++i) {
      s(i) = levels[rem % 3];
      rem /= 3;
    }
    if ((s.array() == 1.0).all()) continue;  // plain spectral already tried
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ESPReport contraction_certificate(const SASModel& model, const Lattice& lattice,
                                  int k_max, std::uint64_t seed) {
  detail::require(!lattice.points.empty(), "contraction_certificate: empty lattice");
  const size_t n_pts = lattice.points.size();

  std::vector<RMat> ps;
  ps.reserve(n_pts);
  ESPReport report;
  for (const RVec& z : lattice.points) {
    SasBlocks b = model.pq(z);
    report.sup_q_norm = std::max(report.sup_q_norm, b.q.norm());
    ps.push_back(std::move(b.p));
  }
  report.lattice_descriptor = lattice.descriptor;
  report.mixing_per_input.resize(n_pts);
  for (size_t i = 0; i < n_pts; ++i) {
    const double radius = spectral_radius(ps[i]);
    report.max_traceless_radius = std::max(report.max_traceless_radius, radius);
    const bool mixing = radius < 1.0 - tol::structural;
    report.mixing_per_input[i] = mixing ? 1 : 0;
    if (!mixing) ++report.n_not_mixing;
  }

  auto sup_over_lattice = [&](auto&& norm_fn) {
    double sup = 0.0;
    for (const RMat& p : ps) sup = std::max(sup, norm_fn(p));
    return sup;
  };
  const double sup_spectral =
      sup_over_lattice([](const RMat& p) { return induced_norm(p, InducedNorm::spectral); });
  const double sup_col =
      sup_over_lattice([](const RMat& p) { return induced_norm(p, InducedNorm::col_sum); });
  const double sup_row =
      sup_over_lattice([](const RMat& p) { return induced_norm(p, InducedNorm::row_sum); });
  report.norm_table = {{"spectral", sup_spectral},
                       {"col_sum", sup_col},
                       {"row_sum", sup_row}};

  // Random length-k product growth as joint-spectral-radius evidence.
  SplitMix64 rng(seed);
  report.product_estimates.assign(static_cast<size_t>(std::max(k_max, 0)), 0.0);
  for (int k = 1; k <= k_max; ++k) {
    double worst = 0.0;
    for (int trial = 0; trial < 32; ++trial) {
      RMat prod = RMat::Identity(ps[0].rows(), ps[0].cols());
      for (int j = 0; j < k; ++j)
        prod = prod * ps[static_cast<size_t>(rng.next() % n_pts)];
      worst = std::max(
          worst, std::pow(induced_norm(prod, InducedNorm::spectral), 1.0 / k));
    }
    report.product_estimates[static_cast<size_t>(k - 1)] = worst;
  }

  if (report.max_traceless_radius >= 1.0 - tol::convergence) {
    report.verdict = ESPReport::Verdict::necessary_condition_failed;
    return report;
  }
  const double root_m = std::sqrt(static_cast<double>(ps[0].rows()));
  const std::vector<double> tail_factors = {1.0, root_m, root_m};
  for (size_t i = 0; i < report.norm_table.size(); ++i) {
    const auto& [name, sup] = report.norm_table[i];
    if (sup < 1.0) {
      report.verdict = ESPReport::Verdict::certified_contractive;
      report.certifying_norm = name;
      report.sup_norm = sup;
      report.epsilon = 1.0 - sup;
      report.tail_factor = tail_factors[i];
      return report;
    }
  }
  // Scaled spectral norms |||D p D^{-1}||| on small blocks.
  for (const RVec& s : scale_candidates(static_cast<int>(ps[0].rows()))) {
    double sup = 0.0;
    for (const RMat& p : ps) {
      const RMat scaled = s.asDiagonal() * p * s.cwiseInverse().asDiagonal();
      sup = std::max(sup, induced_norm(scaled, InducedNorm::spectral));
      if (sup >= 1.0) break;
    }
    if (sup < 1.0) {
      std::ostringstream name;
      name << "scaled_spectral(" << s.transpose() << ")";
      report.norm_table.emplace_back(name.str(), sup);
      report.verdict = ESPReport::Verdict::certified_contractive;
      report.certifying_norm = name.str();
      report.sup_norm = sup;
      report.epsilon = 1.0 - sup;
      report.tail_factor = s.maxCoeff() / s.minCoeff();  // cond of the scaling
      return report;
    }
  }
  report.verdict = ESPReport::Verdict::inconclusive;
  return report;
}

FilterResult filter_eval(const SASModel& model, const std::vector<RVec>& inputs,
                         double rate, double sup_q, double tolerance) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument(
        "filter_eval: need a contraction rate in [0, 1); without one the "
        "filter may not exist");
  detail::require(sup_q >= 0.0, "filter_eval: sup_q must be nonnegative");
  detail::require(tolerance > 0.0, "filter_eval: tolerance must be positive");

  int depth = 0;
  double tail = sup_q / (1.0 - rate);
  while (tail >= tolerance) {
    tail *= rate;
    ++depth;
    if (depth > 100000)
      throw std::invalid_argument("filter_eval: tolerance unreachable at this rate");
  }
  if (static_cast<size_t>(depth) > inputs.size())
    throw std::invalid_argument(
        "filter_eval: need " + std::to_string(depth) + " inputs for tail bound " +
        std::to_string(tolerance) + ", got " + std::to_string(inputs.size()));

  const int m = model.dim * model.dim - 1;
  FilterResult result;
  result.depth = depth;
  result.tail_bound = tail;
  result.x = RVec::Zero(m);
  RMat prod = RMat::Identity(m, m);
  for (int j = 0; j < depth; ++j) {
    const RVec& z = inputs[inputs.size() - 1 - static_cast<size_t>(j)];
    const SasBlocks b = model.pq(z);
    if (j > 0) result.x += prod * b.q;  // prod already holds p(z_t)...p(z_{t-j+1})
    else result.x += b.q;
    prod = prod * b.p;
  }
  return result;
}

FilterResult filter_eval(const SASModel& model, const std::vector<RVec>& inputs,
                         const ESPReport& certificate, double tolerance) {
  if (!certificate.certified())
    throw std::invalid_argument(
        "filter_eval: certificate verdict is " +
        std::string(to_string(certificate.verdict)) +
        "; supply an explicit contraction rate instead");
  return filter_eval(model, inputs, certificate.sup_norm,
                     certificate.sup_q_norm * certificate.tail_factor, tolerance);
}

SpectrumAnalysis spectrum_analysis(const RMat& superop) {
  SpectrumAnalysis out;
  out.eigenvalues = eig(superop, /*with_vectors=*/false).eigenvalues;
  const SasBlocks blocks = sas_decompose(superop);
  out.traceless_spectral_radius = spectral_radius(blocks.p);
  out.is_mixing = out.traceless_spectral_radius < 1.0 - tol::structural;
  RVec dist_to_one = (out.eigenvalues.array() - Cplx(1.0)).abs();
  std::sort(dist_to_one.begin(), dist_to_one.end());
  out.is_ergodic = dist_to_one(0) < tol::structural &&
                   (dist_to_one.size() < 2 || dist_to_one(1) > 1e-8);
  return out;
}

FixedPointEntry fixed_point(const SASModel& model, const RVec& z,
                            const GellMannBasis& basis) {
  const SasBlocks b = model.pq(z);
  const int m = static_cast<int>(b.p.rows());
  const RMat lhs = RMat::Identity(m, m) - b.p;
  // ||I - p|| is O(1) here, so an absolute smallest-singular-value test is
  // the right singularity detector (pivot-relative tests pass on the zero
  // matrix that a unitary block produces).
  const RVec sv = svd(lhs).singular_values;
  if (sv(sv.size() - 1) < 1e-10)
    throw std::runtime_error(
        "fixed_point: I - p(z) is singular (sigma_min=" +
        std::to_string(sv(sv.size() - 1)) +
        "); p(z) has an eigenvalue 1 and the affine fixed point is not unique");
  const RVec x = solve<double>(lhs, b.q);
  FixedPointEntry entry;
  entry.sas_residual = (b.p * x + b.q - x).norm();
  entry.x = x;
  entry.rho = bloch_to_density(entry.x, basis).matrix();
  return entry;
}

FixedPointReport fixed_point_report(const ParamChannel& channel,
                                    const SASModel& model, const Lattice& lattice,
                                    const GellMannBasis& basis) {
  detail::require(!lattice.points.empty(), "fixed_point_report: empty lattice");
  FixedPointReport report;
  report.points.reserve(lattice.points.size());
  for (const RVec& z : lattice.points) {
    FixedPointEntry entry = fixed_point(model, z, basis);
    const Mat mapped = channel.at(z)(entry.rho);
    report.max_map_residual = std::max(
        report.max_map_residual, schatten_norm(Mat(mapped - entry.rho), 1.0));
    report.max_q_norm = std::max(report.max_q_norm, model.q(z).norm());
    report.points.push_back(std::move(entry));
  }
  for (const FixedPointEntry& entry : report.points)
    report.max_deviation =
        std::max(report.max_deviation,
                 schatten_norm(Mat(entry.rho - report.points.front().rho), 1.0));
  report.input_independent = report.max_deviation < 1e-9;
  report.unital = report.max_q_norm < tol::structural;
  return report;
}

TheoremChecks theorem_checks(const ParamChannel& channel, const SASModel& model,
                             const ESPReport& certificate, const Lattice& lattice,
                             const GellMannBasis& basis, std::uint64_t seed) {
  TheoremChecks checks;
  checks.certified = certificate.certified();
  if (!checks.certified) return checks;  // both statements assume contraction

  const FixedPointReport fps = fixed_point_report(channel, model, lattice, basis);
  checks.unital_trivial = fps.unital;
  checks.constant_filter = fps.input_independent;
  const int m = model.dim * model.dim - 1;
  if (checks.unital_trivial) {
    checks.predicted_filter = RVec::Zero(m);
  } else if (checks.constant_filter) {
    checks.predicted_filter = fps.points.front().x;
  }

  const double rate = certificate.sup_norm;
  const double sup_q = fps.max_q_norm;
  const int depth_needed = [&] {
    double tail = (sup_q + 1e-30) / (1.0 - rate);
    int depth = 0;
    while (tail >= 1e-10 && depth < 100000) {
      tail *= rate;
      ++depth;
    }
    return depth + 1;
  }();

  SplitMix64 rng(seed);
  std::vector<BlochVector> outputs;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<RVec> inputs(static_cast<size_t>(depth_needed));
    for (RVec& z : inputs) {
      z.resize(model.domain.dim());
      for (int a = 0; a < z.size(); ++a)
        z(a) = rng.uniform(model.domain.lo(a), model.domain.hi(a));
    }
    outputs.push_back(filter_eval(model, inputs, rate, sup_q, 1e-10).x);
  }
  if (checks.predicted_filter) {
    for (const BlochVector& out : outputs)
      checks.empirical_max_deviation = std::max(
          checks.empirical_max_deviation, (out - *checks.predicted_filter).norm());
  } else {
    for (size_t i = 0; i < outputs.size(); ++i)
      for (size_t j = i + 1; j < outputs.size(); ++j)
        checks.filter_spread =
            std::max(checks.filter_spread, (outputs[i] - outputs[j]).norm());
  }
  return checks;
}

EspProbeReport esp_probe(const ParamChannel& channel, int steps, int n_pairs,
                         std::uint64_t seed) {
  detail::require(steps > 0, "esp_probe: steps must be positive");
  detail::require(n_pairs >= 1, "esp_probe: need at least one pair");
  SplitMix64 rng(seed);
  const InputDomain& dom = channel.domain();
  std::vector<RVec> inputs(static_cast<size_t>(steps));
  for (RVec& z : inputs) {
    z.resize(dom.dim());
    for (int a = 0; a < z.size(); ++a) z(a) = rng.uniform(dom.lo(a), dom.hi(a));
  }
  EspProbeReport report;
  report.max_distance.assign(static_cast<size_t>(steps), 0.0);
  for (int pair = 0; pair < n_pairs; ++pair) {
    Mat a = random_density(channel.dim(), rng).matrix();
    Mat b = random_density(channel.dim(), rng).matrix();
    for (int t = 0; t < steps; ++t) {
      const Channel map = channel.at(inputs[static_cast<size_t>(t)]);
      a = map(a);
      b = map(b);
      report.max_distance[static_cast<size_t>(t)] =
          std::max(report.max_distance[static_cast<size_t>(t)],
                   schatten_norm(Mat(a - b), 1.0));
    }
  }
  report.terminal_distance = report.max_distance.back();
  // Per-step factor from a log-linear fit over the usable range.
  double sum_t = 0, sum_y = 0, sum_tt = 0, sum_ty = 0;
  int n_fit = 0;
  for (int t = 0; t < steps; ++t) {
    const double dist = report.max_distance[static_cast<size_t>(t)];
    if (dist < 1e-14) break;
    const double y = std::log(dist);
    sum_t += t;
    sum_y += y;
    sum_tt += double(t) * t;
    sum_ty += t * y;
    ++n_fit;
  }
  if (n_fit >= 2) {
    const double slope =
        (n_fit * sum_ty - sum_t * sum_y) / (n_fit * sum_tt - sum_t * sum_t);
    report.fitted_rate = std::exp(slope);
  }
  return report;
}

FmpProbeReport fmp_probe(const ParamChannel& channel,
                         const std::function<double(int)>& weight,
                         const std::vector<int>& horizons, int window,
                         std::uint64_t seed) {
  detail::require(window >= 1, "fmp_probe: window must be positive");
  detail::require(std::abs(weight(0) - 1.0) < 1e-12, "fmp_probe: w(0) must be 1");
  SplitMix64 rng(seed);
  const InputDomain& dom = channel.domain();
  auto draw = [&](int n) {
    std::vector<RVec> seq(static_cast<size_t>(n));
    for (RVec& z : seq) {
      z.resize(dom.dim());
      for (int a = 0; a < z.size(); ++a) z(a) = rng.uniform(dom.lo(a), dom.hi(a));
    }
    return seq;
  };
  // Coherent start so the divergent window leaves an order-one mark.
  const DensityMatrix rho0 = maximal_coherent(channel.dim());

  FmpProbeReport report;
  report.horizons = horizons;
  for (int k : horizons) {
    detail::require(k >= 0, "fmp_probe: horizon must be nonnegative");
    // Inputs differ only in the window covering times <= t-k; the two
    // sequences then share the most recent k entries.
    std::vector<RVec> seq_a = draw(window);
    std::vector<RVec> seq_b = draw(window);
    const std::vector<RVec> tail = draw(k);
    double gap = 0.0;
    for (int t = 0; t < window; ++t) {
      const int age = k + window - 1 - t;  // distance from the present
      gap = std::max(gap, weight(age) * (seq_a[static_cast<size_t>(t)] -
                                         seq_b[static_cast<size_t>(t)])
                                            .norm());
    }
    seq_a.insert(seq_a.end(), tail.begin(), tail.end());
    seq_b.insert(seq_b.end(), tail.begin(), tail.end());
    const auto traj_a = iterate_density(channel, rho0, seq_a);
    const auto traj_b = iterate_density(channel, rho0, seq_b);
    report.deviations.push_back(schatten_norm(
        Mat(traj_a.back().matrix() - traj_b.back().matrix()), 1.0));
    report.weighted_gaps.push_back(gap);
  }
  // Decay rate of deviation vs horizon from a log-linear fit.
  double sum_k = 0, sum_y = 0, sum_kk = 0, sum_ky = 0;
  int n_fit = 0;
  for (size_t i = 0; i < report.deviations.size(); ++i) {
    if (report.deviations[i] < 1e-14) continue;
    const double y = std::log(report.deviations[i]);
    const double k = report.horizons[i];
    sum_k += k;
    sum_y += y;
    sum_kk += k * k;
    sum_ky += k * y;
    ++n_fit;
  }
  if (n_fit >= 2) {
    const double slope =
        (n_fit * sum_ky - sum_k * sum_y) / (n_fit * sum_kk - sum_k * sum_k);
    report.fitted_rate = std::exp(slope);
  }
  return report;
}

}  // namespace qsas
