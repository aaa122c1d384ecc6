#pragma once

// State-affine view of input-driven channels: extraction of the traceless
// block p(z) and offset q(z), trajectory iteration in both representations,
// filter evaluation with explicit truncation bounds, spectral analysis,
// contraction certificates for the echo-state/fading-memory properties,
// fixed points, and the two triviality checks (unital channels and
// input-independent fixed points force constant filters).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsas/basis.hpp"
#include "qsas/channels.hpp"
#include "qsas/types.hpp"

namespace qsas {

/// Matrix of a channel in a Hermitian orthonormal basis, entries
/// tr(Bi^dagger T(Bj)). Real for Hermiticity-preserving maps; throws if the
/// imaginary residue exceeds the tolerance.
RMat superop_matrix(const Channel& t, const GellMannBasis& basis,
                    double imag_tolerance = tol::structural);

/// Blocks of a trace-preserving superoperator: acting on coordinates
/// (1/sqrt(d), x) it sends x to p x + q.
struct SasBlocks {
  RMat p;  // (d^2-1) x (d^2-1) traceless-block restriction
  RVec q;  // offset in orthonormal coordinates (first column / sqrt(d))
};

SasBlocks sas_decompose(const RMat& superop, double tolerance = tol::structural);
RMat sas_reassemble(const SasBlocks& blocks);

/// x_t = p(z_t) x_{t-1} + q(z_t) over a compact input box.
struct SASModel {
  int dim = 0;  // Hilbert-space dimension d; the state lives in R^{d^2-1}
  InputDomain domain;
  std::function<RMat(const RVec&)> superop;

  SasBlocks pq(const RVec& z) const { return sas_decompose(superop(z)); }
  RMat p(const RVec& z) const { return pq(z).p; }
  RVec q(const RVec& z) const { return pq(z).q; }
};

SASModel make_sas(const ParamChannel& channel,
                  std::shared_ptr<const GellMannBasis> basis);

/// One affine step; inputs outside the domain are reported, not clamped.
BlochVector sas_step(const SASModel& model, const BlochVector& x, const RVec& z);

std::vector<BlochVector> iterate_sas(const SASModel& model, BlochVector x0,
                                     const std::vector<RVec>& inputs);

/// Density-matrix iteration with the drift policy: states are re-Hermitized
/// each step, the trace is renormalized only beyond 1e-12, and PSD is never
/// forced (a real violation throws).
std::vector<DensityMatrix> iterate_density(const ParamChannel& channel,
                                           const DensityMatrix& rho0,
                                           const std::vector<RVec>& inputs);

/// Uniform per-axis grid over the domain (endpoints included) plus seeded
/// uniform interior points; every certificate records this descriptor.
struct Lattice {
  std::vector<RVec> points;
  std::string descriptor;
};

Lattice make_lattice(const InputDomain& domain, int per_axis = 101,
                     int n_random = 1000, std::uint64_t seed = 0);

struct ESPReport {
  enum class Verdict { certified_contractive, necessary_condition_failed, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::string certifying_norm;  // set when certified
  double sup_norm = 0.0;        // sup over the lattice in the certifying norm
  double epsilon = 0.0;         // 1 - sup_norm
  std::vector<std::pair<std::string, double>> norm_table;
  std::vector<double> product_estimates;  // max |||p_{k} ... p_{1}|||^{1/k}
  std::vector<unsigned char> mixing_per_input;
  int n_not_mixing = 0;
  double max_traceless_radius = 0.0;
  double sup_q_norm = 0.0;     // max_z ||q(z)||_2 over the lattice
  double tail_factor = 1.0;    // Euclidean equivalence constant of the
                               // certifying norm, used in truncation bounds
  std::string lattice_descriptor;

  bool certified() const { return verdict == Verdict::certified_contractive; }
};

const char* to_string(ESPReport::Verdict v);

/// Tries the spectral, column-sum and row-sum norms, then diagonally scaled
/// spectral norms on small blocks; also estimates the growth of random
/// length-k products as joint-spectral-radius evidence. Any norm uniformly
/// below one certifies; a lattice point whose traceless block has spectral
/// radius >= 1 refutes the necessary mixing condition; otherwise the
/// verdict is inconclusive.
ESPReport contraction_certificate(const SASModel& model, const Lattice& lattice,
                                  int k_max = 6, std::uint64_t seed = 1);

struct FilterResult {
  BlochVector x;
  int depth = 0;          // number of terms kept
  double tail_bound = 0;  // rate^depth * sup_q / (1 - rate)
};

/// Truncated filter sum over the most recent inputs (chronological order,
/// inputs.back() is time t). Requires a contraction rate < 1; refuses
/// otherwise since the filter may not exist.
FilterResult filter_eval(const SASModel& model, const std::vector<RVec>& inputs,
                         double rate, double sup_q, double tolerance = 1e-12);
FilterResult filter_eval(const SASModel& model, const std::vector<RVec>& inputs,
                         const ESPReport& certificate, double tolerance = 1e-12);

struct SpectrumAnalysis {
  Vec eigenvalues;  // deterministic order (modulus desc)
  double traceless_spectral_radius = 0.0;
  bool is_mixing = false;
  bool is_ergodic = false;
};

SpectrumAnalysis spectrum_analysis(const RMat& superop);

struct FixedPointEntry {
  BlochVector x;
  Mat rho;
  double sas_residual = 0.0;  // ||p x* + q - x*||_2
};

/// x* = (I - p(z))^{-1} q(z); throws when I - p(z) is singular (p has an
/// eigenvalue 1) or when the reconstruction is not a state.
FixedPointEntry fixed_point(const SASModel& model, const RVec& z,
                            const GellMannBasis& basis);

struct FixedPointReport {
  std::vector<FixedPointEntry> points;  // aligned with the lattice
  bool input_independent = false;
  double max_deviation = 0.0;     // max_z ||rho*(z) - rho*(z_0)||_1
  bool unital = false;
  double max_q_norm = 0.0;        // max_z ||q(z)||_2
  double max_map_residual = 0.0;  // max_z ||T(rho*(z), z) - rho*(z)||_1
};

FixedPointReport fixed_point_report(const ParamChannel& channel,
                                    const SASModel& model, const Lattice& lattice,
                                    const GellMannBasis& basis);

struct TheoremChecks {
  bool certified = false;       // hypothesis of both triviality statements
  bool unital_trivial = false;  // q == 0 on the lattice => filter is I/d
  bool constant_filter = false; // input-independent fixed point => constant
  std::optional<BlochVector> predicted_filter;
  double empirical_max_deviation = 0.0;  // filter outputs vs prediction
  double filter_spread = 0.0;            // max pairwise distance otherwise
};

/// Predicts trivial/constant filters from unital/fixed-point structure and
/// cross-validates against filter evaluations on random input sequences.
TheoremChecks theorem_checks(const ParamChannel& channel, const SASModel& model,
                             const ESPReport& certificate, const Lattice& lattice,
                             const GellMannBasis& basis, std::uint64_t seed = 7);

struct EspProbeReport {
  std::vector<double> max_distance;  // per step, max over trial pairs
  double terminal_distance = 0.0;
  double fitted_rate = 0.0;  // per-step contraction factor estimate
};

/// Drives pairs of random initial states with a shared random input
/// sequence and reports the trace-norm distance decay.
EspProbeReport esp_probe(const ParamChannel& channel, int steps, int n_pairs,
                         std::uint64_t seed);

struct FmpProbeReport {
  std::vector<int> horizons;
  std::vector<double> deviations;      // ||rho_T - rho'_T||_1 per horizon
  std::vector<double> weighted_gaps;   // weighted-norm input distances
  double fitted_rate = 0.0;            // deviation decay per horizon step
};

/// Perturbs inputs only at times <= t-k (a window of `window` entries just
/// before the shared tail) and measures the output deviation as a function
/// of k; under a contraction certificate the decay is geometric. The
/// weighting sequence w (decreasing, w(0) = 1) sets the reported
/// input-distance scale.
FmpProbeReport fmp_probe(const ParamChannel& channel,
                         const std::function<double(int)>& weight,
                         const std::vector<int>& horizons, int window,
                         std::uint64_t seed);

}  // namespace qsas
