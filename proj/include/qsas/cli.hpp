#pragma once

// Batch commands behind the command-line tool: analyze (JSON report), scan
// (singular-value CSV grid), drive (trajectory CSV) and verify (acceptance
// suite). All outputs are deterministic for a fixed spec + config + seed
// and written atomically (temp file + rename).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsas/channel_spec.hpp"

namespace qsas {

struct RunConfig {
  std::optional<int> lattice;            // grid points per axis
  std::optional<int> steps;              // trajectory length
  std::optional<std::uint64_t> seed;     // overrides the spec seed
  int random_points = 1000;              // extra lattice samples
  double tol_scale = 1.0;                // verify only
  std::string filter;                    // verify only
  std::filesystem::path out;             // output path; defaulted per command
};

/// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInvalidInput = 2;

std::string analyze_report_json(const ChannelSpec& spec, const RunConfig& config);
std::string scan_csv(const ChannelSpec& spec, const RunConfig& config);
std::string drive_csv(const ChannelSpec& spec, const RunConfig& config);

/// One scan cell; empty optionals mark excluded loci.
struct ScanRow {
  double h = 0, gamma = 0;
  std::optional<double> sigma1, sigma2, sigma3, max_eig_mod;
};
std::vector<ScanRow> scan_rows(const ChannelSpec& spec, int n_per_axis);

int run_analyze(const ChannelSpec& spec, const RunConfig& config);
int run_scan(const ChannelSpec& spec, const RunConfig& config);
int run_drive(const ChannelSpec& spec, const RunConfig& config);
int run_verify(const RunConfig& config);

/// Resolves the output path: explicit --out, else QSAS_OUT_DIR/<fallback>,
/// else ./<fallback>.
std::filesystem::path resolve_out(const RunConfig& config,
                                  const std::string& fallback);

void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qsas
