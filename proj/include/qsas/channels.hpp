#pragma once

// Input-parametrized quantum channels: Kraus sets, complete-positivity
// checks via the Choi matrix, named channel families, composition and the
// epsilon-blend construction.

#include <functional>
#include <optional>
#include <vector>

#include "qsas/basis.hpp"
#include "qsas/numerics.hpp"
#include "qsas/rng.hpp"
#include "qsas/types.hpp"

namespace qsas {

/// Kraus operators {K_i} with sum_i K_i^dagger K_i = I (validated) and at
/// most d^2 operators.
struct KrausSet {
  int dim = 0;
  std::vector<Mat> ops;

  KrausSet(int dim, std::vector<Mat> operators, double tolerance = tol::structural);
  double completeness_defect() const;  // ||sum K^dagger K - I||_max
};

/// A fixed linear map on d x d operators, CPTP for all maps constructed
/// here. Holds a Kraus set when one is known; otherwise only the action.
class Channel {
 public:
  static Channel from_kraus(KrausSet kraus);
  static Channel from_action(int dim, std::function<Mat(const Mat&)> action);
  /// Action through a superoperator matrix in a Hermitian orthonormal basis.
  static Channel from_superop(RMat superop, std::shared_ptr<const GellMannBasis> basis);

  Mat operator()(const Mat& a) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  int dim() const { return dim_; }
  const std::optional<KrausSet>& kraus() const { return kraus_; }
  /// Kraus set, extracting one from the Choi matrix if necessary.
  KrausSet kraus_or_extract() const;

 private:
  Channel(int dim, std::function<Mat(const Mat&)> action, std::optional<KrausSet> k)
      : dim_(dim), action_(std::move(action)), kraus_(std::move(k)) {}
  int dim_ = 0;
  std::function<Mat(const Mat&)> action_;
  std::optional<KrausSet> kraus_;
};

struct CptpReport {
  double completeness_defect = 0;   // Kraus completeness / dual trace condition
  double trace_defect = 0;          // max |tr(T(E_ij)) - delta_ij|
  double choi_min_eigenvalue = 0;   // >= -tol iff completely positive
  bool pass(double tolerance = tol::structural) const {
    return completeness_defect < tolerance && trace_defect < tolerance &&
           choi_min_eigenvalue > -tolerance;
  }
};

/// Choi matrix C = sum_ij E_ij (x) T(E_ij); PSD iff T is completely
/// positive, partial trace over the output factor equals I iff T is
/// trace preserving.
Mat choi(const Channel& t);

CptpReport is_cptp(const Channel& t);

/// Kraus operators from the eigendecomposition of a Choi matrix; keeps
/// eigenvalues above the cutoff. Throws if the Choi matrix is materially
/// non-PSD (the map is not a channel).
KrausSet kraus_from_choi(const Mat& choi_matrix, double cutoff = 1e-12);

Channel identity_channel(int d);
/// E(A) = (1-lambda) A + lambda tr(A) I/d; unital, strictly contractive on
/// the traceless block for lambda > 0.
Channel depolarizing(double lambda, int d);
/// Qubit dephasing with measurement strength g: diagonal preserved,
/// off-diagonals scaled by exp(-g^2/2). Kraus form
/// {e^{-g^2/4} I, sqrt(1-e^{-g^2/2}) |0><0|, sqrt(1-e^{-g^2/2}) |1><1|}.
/// Note this is NOT the two-term mixture k rho + (1-k) sz rho sz with
/// k = e^{-g^2/2}, which would damp off-diagonals by 2k - 1 instead of k;
/// the Kraus/Hadamard-mask convention is the one implemented.
Channel dephasing(double g);
Channel unitary_channel(const Mat& u, double tolerance = tol::structural);
/// Applies `first`, then `second`; superoperator matrices multiply in the
/// same order.
Channel compose(const Channel& second, const Channel& first);

/// Compact box in input space.
struct InputDomain {
  RVec lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const RVec& z, double slack = 0.0) const;
  RVec midpoint() const { return 0.5 * (lo + hi); }
};

InputDomain unit_interval();

/// Map from inputs z in a compact box to channels.
class ParamChannel {
 public:
  ParamChannel(int dim, InputDomain domain, std::function<Channel(const RVec&)> eval)
      : dim_(dim), domain_(std::move(domain)), eval_(std::move(eval)) {}

  Channel at(const RVec& z) const;  // throws on domain violation
  int dim() const { return dim_; }
  const InputDomain& domain() const { return domain_; }

 private:
  int dim_;
  InputDomain domain_;
  std::function<Channel(const RVec&)> eval_;
};

/// rho_t = (1-eps) T(rho_{t-1}, z_t) + eps sigma. CPTP for CPTP T and
/// 0 < eps < 1; always has a unique filter.
ParamChannel blend(ParamChannel base, DensityMatrix sigma, double eps);

// --- Seeded sampling used by tests, probes and the acceptance suite ---

DensityMatrix random_pure_state(int d, SplitMix64& rng);
/// Hilbert-Schmidt-distributed mixed state G G^dagger / tr(G G^dagger).
DensityMatrix random_density(int d, SplitMix64& rng);
/// Random CPTP channel: Gaussian blocks orthonormalized into a Kraus set.
Channel random_channel(int d, SplitMix64& rng, int n_kraus = 0);
/// Input-dependent channel: convex path (1-z) T_a + z T_b between two
/// random channels, z in [0,1].
ParamChannel random_param_channel(int d, SplitMix64& rng);

}  // namespace qsas
