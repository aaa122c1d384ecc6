#pragma once

// Declarative channel-spec files (flat key-value text, one section per
// component) and the factory that turns them into driven systems.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "qsas/channels.hpp"
#include "qsas/sas.hpp"

namespace qsas {

/// Parsed channel-spec file. Sections: [channel] (family + named real
/// parameters), [input] (dim, lo, hi, encoding, enc_scale, enc_offset) and
/// [run] (seed, steps, lattice).
struct ChannelSpec {
  std::string family;
  std::map<std::string, double> params;  // family parameters, all real
  int input_dim = 1;
  double lo = 0.0, hi = 1.0;
  std::string encoding = "scaled";  // scaled: u = z; affine: u = off + scale z
  double enc_scale = 1.0, enc_offset = 0.0;
  std::uint64_t seed = 12345;
  int steps = 500;    // default trajectory length
  int lattice = 101;  // default lattice points per axis

  double param(const std::string& key, double fallback) const;
};

ChannelSpec parse_channel_spec(const std::string& text);
ChannelSpec load_channel_spec(const std::filesystem::path& path);

/// A channel family bound to its input encoding: the density-space channel,
/// its state-affine view, and the shared basis.
struct ChannelSystem {
  ChannelSpec spec;
  std::shared_ptr<const GellMannBasis> basis;
  ParamChannel channel;
  SASModel sas;

  int dim() const { return channel.dim(); }
};

/// Known families: depolarizing, dephasing, lindblad_ing, lindblad_bad,
/// lindblad_good, measurement_composed, composed, blend.
ChannelSystem build_system(const ChannelSpec& spec);

/// Analytic propagator tables for the Lindblad-derived families at explicit
/// parameter values (used by parameter scans).
bool family_scannable(const std::string& family);
RMat family_table(const std::string& family, double gamma, double h, double dt,
                  double g);
/// Removable-singularity locus gamma = c * h for the family (0 when none).
double family_excluded_locus_factor(const std::string& family);

}  // namespace qsas
