#include "qsas/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "qsas/acceptance.hpp"
#include "qsas/lindblad.hpp"
#include "qsas/rng.hpp"
#include "qsas/sas.hpp"

namespace qsas {

namespace {

using nlohmann::json;

std::string format_float(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

json to_json(const RMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Mat& m) {  // complex entries as [re, im]
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(json::array({v(i).real(), v(i).imag()}));
  return out;
}

json spec_json(const ChannelSpec& spec) {
  json params(json::value_t::object);
  for (const auto& [key, value] : spec.params) params[key] = value;
  return json{{"family", spec.family},
              {"params", params},
              {"input", {{"dim", spec.input_dim},
                         {"lo", spec.lo},
                         {"hi", spec.hi},
                         {"encoding", spec.encoding},
                         {"enc_scale", spec.enc_scale},
                         {"enc_offset", spec.enc_offset}}},
              {"seed", spec.seed}};
}

}  // namespace

std::filesystem::path resolve_out(const RunConfig& config,
                                  const std::string& fallback) {
  if (!config.out.empty()) return config.out;
  if (const char* dir = std::getenv("QSAS_OUT_DIR"))
    return std::filesystem::path(dir) / fallback;
  return std::filesystem::path(fallback);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string analyze_report_json(const ChannelSpec& spec, const RunConfig& config) {
  const ChannelSystem system = build_system(spec);
  const std::uint64_t seed = config.seed.value_or(spec.seed);
  const int per_axis = config.lattice.value_or(spec.lattice);

  const Lattice lattice =
      make_lattice(system.sas.domain, per_axis, config.random_points, seed);
  const ESPReport esp = contraction_certificate(system.sas, lattice, 6, seed + 1);

  json report;
  report["spec"] = spec_json(spec);
  report["seed"] = seed;
  report["lattice"] = {{"descriptor", lattice.descriptor},
                       {"points_per_axis", per_axis},
                       {"random_points", config.random_points},
                       {"total_points", lattice.points.size()}};

  const RVec mid = system.sas.domain.midpoint();
  const RMat superop_mid = system.sas.superop(mid);
  const SasBlocks blocks = sas_decompose(superop_mid);
  report["input_midpoint"] = to_json(mid);
  report["superop_mid"] = to_json(superop_mid);
  report["p_mid"] = to_json(blocks.p);
  report["q_mid"] = to_json(blocks.q);

  const SpectrumAnalysis spectrum = spectrum_analysis(superop_mid);
  report["spectrum_mid"] = {
      {"eigenvalues", to_json(spectrum.eigenvalues)},
      {"traceless_spectral_radius", spectrum.traceless_spectral_radius},
      {"is_mixing", spectrum.is_mixing},
      {"is_ergodic", spectrum.is_ergodic}};

  json norm_table(json::value_t::object);
  for (const auto& [name, sup] : esp.norm_table) norm_table[name] = sup;
  report["esp"] = {{"verdict", to_string(esp.verdict)},
                   {"certifying_norm", esp.certifying_norm},
                   {"sup_norm", esp.sup_norm},
                   {"epsilon", esp.epsilon},
                   {"norm_table", norm_table},
                   {"product_estimates", esp.product_estimates},
                   {"n_not_mixing", esp.n_not_mixing},
                   {"max_traceless_radius", esp.max_traceless_radius},
                   {"sup_q_norm", esp.sup_q_norm},
                   {"lattice", esp.lattice_descriptor}};

  try {
    const FixedPointReport fps =
        fixed_point_report(system.channel, system.sas, lattice, *system.basis);
    const FixedPointEntry mid_fp = fixed_point(system.sas, mid, *system.basis);
    json entry = {{"bloch", to_json(mid_fp.x)},
                  {"rho", to_json(mid_fp.rho)},
                  {"sas_residual", mid_fp.sas_residual}};
    if (system.dim() == 2) entry["pauli"] = to_json(RVec(bloch_to_pauli(mid_fp.x, 2)));
    report["fixed_point"] = {{"input_independent", fps.input_independent},
                             {"max_deviation", fps.max_deviation},
                             {"unital", fps.unital},
                             {"max_q_norm", fps.max_q_norm},
                             {"max_map_residual", fps.max_map_residual},
                             {"at_midpoint", entry}};
  } catch (const std::exception& e) {
    report["fixed_point"] = {{"error", e.what()}};
  }

  if (esp.certified()) {
    const TheoremChecks checks = theorem_checks(system.channel, system.sas, esp,
                                                lattice, *system.basis, seed + 2);
    json t = {{"certified", checks.certified},
              {"unital_trivial", checks.unital_trivial},
              {"constant_filter", checks.constant_filter},
              {"empirical_max_deviation", checks.empirical_max_deviation},
              {"filter_spread", checks.filter_spread}};
    if (checks.predicted_filter) {
      t["predicted_filter_bloch"] = to_json(*checks.predicted_filter);
      if (system.dim() == 2)
        t["predicted_filter_pauli"] =
            to_json(RVec(bloch_to_pauli(*checks.predicted_filter, 2)));
    }
    report["theorems"] = std::move(t);
  } else {
    report["theorems"] = {{"certified", false},
                          {"note", "contraction hypothesis not certified; "
                                   "triviality checks not applicable"}};
  }
  return report.dump(2) + "\n";
}

std::vector<ScanRow> scan_rows(const ChannelSpec& spec, int n_per_axis) {
  if (!family_scannable(spec.family))
    throw std::invalid_argument("scan: family '" + spec.family +
                                "' has no (h, gamma) parameter scan");
  const double dt = spec.param("dt", 1.0);
  const double g = spec.param("g", 1.0);
  const double locus = family_excluded_locus_factor(spec.family);
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<size_t>(n_per_axis) * n_per_axis);
  for (int i = 1; i <= n_per_axis; ++i)
    for (int j = 1; j <= n_per_axis; ++j) {
      ScanRow row;
      row.h = 2.0 * i / n_per_axis;
      row.gamma = 2.0 * j / n_per_axis;
      if (locus > 0.0 && std::abs(row.gamma - locus * row.h) < 1e-3) {
        rows.push_back(row);  // excluded locus: empty cells
        continue;
      }
      const SasBlocks blocks =
          sas_decompose(family_table(spec.family, row.gamma, row.h, dt, g));
      const RVec sv = svd(blocks.p).singular_values;
      row.sigma1 = sv(0);
      row.sigma2 = sv(1);
      row.sigma3 = sv(2);
      row.max_eig_mod = spectral_radius(blocks.p);
      rows.push_back(row);
    }
  return rows;
}

namespace {
std::string params_comment(const ChannelSpec& spec) {
  std::string out = "# family=" + spec.family;
  for (const auto& [key, value] : spec.params)
    out += " " + key + "=" + format_float(value);
  return out;
}
}  // namespace

std::string scan_csv(const ChannelSpec& spec, const RunConfig& config) {
  const int n = config.lattice.value_or(spec.lattice);
  std::string out = params_comment(spec) + " axes=h_t,gamma range=(0,2] n=" +
                    std::to_string(n) + "\n";
  out += "h_t,gamma,sigma1,sigma2,sigma3,max_eig_mod_traceless\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format_float(*v) : std::string();
  };
  for (const ScanRow& row : scan_rows(spec, n)) {
    out += format_float(row.h) + "," + format_float(row.gamma) + "," +
           cell(row.sigma1) + "," + cell(row.sigma2) + "," + cell(row.sigma3) +
           "," + cell(row.max_eig_mod) + "\n";
  }
  return out;
}

std::string drive_csv(const ChannelSpec& spec, const RunConfig& config) {
  const ChannelSystem system = build_system(spec);
  if (system.dim() != 2)
    throw std::invalid_argument("drive: trajectory output is qubit-only");
  const int steps = config.steps.value_or(spec.steps);
  const std::uint64_t seed = config.seed.value_or(spec.seed);

  std::string out = params_comment(spec) + " seed=" + std::to_string(seed) +
                    " steps=" + std::to_string(steps) + " domain=[" +
                    format_float(spec.lo) + "," + format_float(spec.hi) + "]\n";
  out += "t,z_t,sx,sy,sz\n";
  SplitMix64 rng(seed);
  BlochVector x = density_to_bloch(maximal_coherent(2), *system.basis);
  for (int t = 1; t <= steps; ++t) {
    const double z = rng.uniform(spec.lo, spec.hi);
    x = sas_step(system.sas, x, RVec::Constant(1, z));
    const RVec pauli = bloch_to_pauli(x, 2);
    out += std::to_string(t) + "," + format_float(z) + "," +
           format_float(pauli(0)) + "," + format_float(pauli(1)) + "," +
           format_float(pauli(2)) + "\n";
  }
  return out;
}

int run_analyze(const ChannelSpec& spec, const RunConfig& config) {
  write_atomic(resolve_out(config, "analyze.json"), analyze_report_json(spec, config));
  return kExitOk;
}

int run_scan(const ChannelSpec& spec, const RunConfig& config) {
  write_atomic(resolve_out(config, "scan.csv"), scan_csv(spec, config));
  return kExitOk;
}

int run_drive(const ChannelSpec& spec, const RunConfig& config) {
  write_atomic(resolve_out(config, "drive.csv"), drive_csv(spec, config));
  return kExitOk;
}

int run_verify(const RunConfig& config) {
  AcceptanceOptions options;
  options.filter = config.filter;
  options.tol_scale = config.tol_scale;
  const std::vector<CheckResult> results = run_acceptance(options);
  if (results.empty()) {
    std::fprintf(stderr, "verify: no checks match filter '%s'\n",
                 config.filter.c_str());
    return kExitInvalidInput;
  }
  bool all_pass = true;
  for (const CheckResult& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%s %-45s (%.2fs) %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.pass ? "" : r.detail.c_str());
  }
  std::printf("%zu/%zu checks passed\n",
              static_cast<size_t>(std::count_if(results.begin(), results.end(),
                                                [](const CheckResult& r) {
                                                  return r.pass;
                                                })),
              results.size());
  return all_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace qsas
