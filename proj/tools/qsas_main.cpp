// qsas: analyze, scan, drive and verify input-driven quantum channels in
// their state-affine representation.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "qsas/cli.hpp"

namespace {

void add_common(CLI::App* cmd, std::string& spec_path, qsas::RunConfig& config,
                bool need_spec) {
  auto* spec_opt = cmd->add_option("--spec", spec_path, "channel-spec file");
  if (need_spec) spec_opt->required();
  cmd->add_option("--out", config.out, "output path (default: QSAS_OUT_DIR or cwd)");
  cmd->add_option("--lattice", [&config](const CLI::results_t& r) {
    config.lattice = std::stoi(r[0]);
    return true;
  }, "grid points per axis");
  cmd->add_option("--steps", [&config](const CLI::results_t& r) {
    config.steps = std::stoi(r[0]);
    return true;
  }, "trajectory length");
  cmd->add_option("--seed", [&config](const CLI::results_t& r) {
    config.seed = std::stoull(r[0]);
    return true;
  }, "seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-affine analysis of input-driven quantum channels"};
  app.require_subcommand(1);

  std::string spec_path;
  qsas::RunConfig config;

  CLI::App* analyze = app.add_subcommand("analyze", "write a JSON analysis report");
  add_common(analyze, spec_path, config, true);

  CLI::App* scan = app.add_subcommand("scan", "write a (h, gamma) singular-value CSV");
  add_common(scan, spec_path, config, true);

  CLI::App* drive = app.add_subcommand("drive", "write a driven-trajectory CSV");
  add_common(drive, spec_path, config, true);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(verify, spec_path, config, false);
  verify->add_option("--filter", config.filter, "run only checks containing this");
  verify->add_option("--tol-scale", config.tol_scale,
                     "scale all acceptance tolerances (diagnostic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qsas::kExitOk : qsas::kExitInvalidInput;
  }

  try {
    if (*verify) return qsas::run_verify(config);
    const qsas::ChannelSpec spec = qsas::load_channel_spec(spec_path);
    if (*analyze) return qsas::run_analyze(spec, config);
    if (*scan) return qsas::run_scan(spec, config);
    if (*drive) return qsas::run_drive(spec, config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return qsas::kExitInvalidInput;
  }
  return qsas::kExitInvalidInput;
}
