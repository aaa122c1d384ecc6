#include "qsas/channel_spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qsas/lindblad.hpp"

namespace qsas {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kFamilies = {
    "depolarizing", "dephasing",  "lindblad_ing", "lindblad_bad",
    "lindblad_good", "measurement_composed", "composed", "blend"};

const std::set<std::string> kInputKeys = {"dim", "lo", "hi", "encoding",
                                          "enc_scale", "enc_offset"};
const std::set<std::string> kRunKeys = {"seed", "steps", "lattice"};

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("channel spec: bad numeric value for '" + key +
                                "': " + value);
  }
}

}  // namespace

double ChannelSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ChannelSpec parse_channel_spec(const std::string& text) {
  ChannelSpec spec;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section != "channel" && section != "input" && section != "run")
        throw std::invalid_argument("channel spec: unknown section [" + section +
                                    "] at line " + std::to_string(line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("channel spec: expected key = value at line " +
                                  std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "channel") {
      if (key == "family") {
        if (!kFamilies.count(value))
          throw std::invalid_argument("channel spec: unknown family '" + value + "'");
        spec.family = value;
      } else {
        spec.params[key] = parse_real(key, value);
      }
    } else if (section == "input") {
      if (!kInputKeys.count(key))
        throw std::invalid_argument("channel spec: unknown input key '" + key + "'");
      if (key == "dim") spec.input_dim = static_cast<int>(parse_real(key, value));
      else if (key == "lo") spec.lo = parse_real(key, value);
      else if (key == "hi") spec.hi = parse_real(key, value);
      else if (key == "encoding") spec.encoding = value;
      else if (key == "enc_scale") spec.enc_scale = parse_real(key, value);
      else if (key == "enc_offset") spec.enc_offset = parse_real(key, value);
    } else if (section == "run") {
      if (!kRunKeys.count(key))
        throw std::invalid_argument("channel spec: unknown run key '" + key + "'");
      if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "steps") spec.steps = static_cast<int>(parse_real(key, value));
      else if (key == "lattice") spec.lattice = static_cast<int>(parse_real(key, value));
    } else {
      throw std::invalid_argument("channel spec: key outside any section at line " +
                                  std::to_string(line_no));
    }
  }
  if (spec.family.empty())
    throw std::invalid_argument("channel spec: missing channel.family");
  if (spec.input_dim != 1)
    throw std::invalid_argument("channel spec: built-in families take one input");
  if (!(spec.lo < spec.hi))
    throw std::invalid_argument("channel spec: empty input box");
  if (spec.encoding != "scaled" && spec.encoding != "affine")
    throw std::invalid_argument("channel spec: unknown encoding '" + spec.encoding + "'");
  if (spec.steps < 0 || spec.lattice < 2)
    throw std::invalid_argument("channel spec: bad run parameters");
  return spec;
}

ChannelSpec load_channel_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel spec: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_channel_spec(buffer.str());
}

namespace {

double encode(const ChannelSpec& spec, double z) {
  return spec.encoding == "affine" ? spec.enc_offset + spec.enc_scale * z : z;
}

InputDomain domain_of(const ChannelSpec& spec) {
  InputDomain dom;
  dom.lo = RVec::Constant(1, spec.lo);
  dom.hi = RVec::Constant(1, spec.hi);
  return dom;
}

void require_range(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("channel spec: " + what);
}

Mat axis_rotation(double angle) {
  return matrix_exponential(Mat(Cplx(0, -angle / 2) * pauli_z()));
}

}  // namespace

bool family_scannable(const std::string& family) {
  return family == "lindblad_ing" || family == "lindblad_bad" ||
         family == "lindblad_good" || family == "measurement_composed";
}

RMat family_table(const std::string& family, double gamma, double h, double dt,
                  double g) {
  if (family == "lindblad_ing") return example_unital_dephasing(gamma, h, dt).superop;
  if (family == "lindblad_bad") return example_bad_zfield(gamma, h, dt).superop;
  if (family == "lindblad_good") return example_good_xfield(gamma, h, dt).superop;
  if (family == "measurement_composed")
    return measurement_composed(gamma, h, dt, g).superop;
  throw std::invalid_argument("family_table: '" + family + "' has no analytic table");
}

double family_excluded_locus_factor(const std::string& family) {
  if (family == "lindblad_ing") return 1.0;
  if (family == "lindblad_good" || family == "measurement_composed") return 4.0;
  return 0.0;
}

ChannelSystem build_system(const ChannelSpec& spec) {
  const InputDomain dom = domain_of(spec);

  if (family_scannable(spec.family)) {
    const double gamma = spec.param("gamma", 1.0);
    const double h = spec.param("h", 1.0);
    const double dt = spec.param("dt", 1.0);
    const double g = spec.param("g", 1.0);
    require_range(gamma > 0.0, "gamma must be positive");
    require_range(dt > 0.0, "dt must be positive");
    require_range(g >= 0.0, "g must be nonnegative");
    auto basis = std::make_shared<const GellMannBasis>(gellmann_basis(2));
    auto table = [family = spec.family, spec, gamma, h, dt, g](const RVec& z) {
      return family_table(family, gamma, h * encode(spec, z(0)), dt, g);
    };
    SASModel sas;
    sas.dim = 2;
    sas.domain = dom;
    sas.superop = table;
    ParamChannel channel(2, dom, [table, basis](const RVec& z) {
      return Channel::from_superop(table(z), basis);
    });
    return ChannelSystem{spec, basis, std::move(channel), std::move(sas)};
  }

  if (spec.family == "depolarizing") {
    const int d = static_cast<int>(spec.param("d", 2.0));
    const double lmin = spec.param("lambda_min", 0.1);
    const double lmax = spec.param("lambda_max", 0.9);
    require_range(d >= 2 && d <= 8, "depolarizing dimension must be in [2, 8]");
    require_range(0.0 <= lmin && lmin <= lmax && lmax <= 1.0,
                  "need 0 <= lambda_min <= lambda_max <= 1");
    auto basis = std::make_shared<const GellMannBasis>(gellmann_basis(d));
    ParamChannel channel(d, dom, [spec, d, lmin, lmax](const RVec& z) {
      const double u = std::clamp(encode(spec, z(0)), 0.0, 1.0);
      return depolarizing(lmin + (lmax - lmin) * u, d);
    });
    SASModel sas = make_sas(channel, basis);
    return ChannelSystem{spec, basis, std::move(channel), std::move(sas)};
  }

  if (spec.family == "dephasing") {
    const double g = spec.param("g", 1.0);
    require_range(g >= 0.0, "g must be nonnegative");
    auto basis = std::make_shared<const GellMannBasis>(gellmann_basis(2));
    ParamChannel channel(2, dom, [g](const RVec&) { return dephasing(g); });
    SASModel sas = make_sas(channel, basis);
    return ChannelSystem{spec, basis, std::move(channel), std::move(sas)};
  }

  if (spec.family == "composed") {
    // input unitary followed by unital noise: depolarizing after dephasing
    const double theta = spec.param("theta", 3.14159265358979323846);
    const double lambda = spec.param("lambda", 0.35);
    const double g = spec.param("g", 0.5);
    require_range(lambda > 0.0 && lambda < 1.0, "lambda must be in (0, 1)");
    require_range(g >= 0.0, "g must be nonnegative");
    auto basis = std::make_shared<const GellMannBasis>(gellmann_basis(2));
    ParamChannel channel(2, dom, [spec, theta, lambda, g](const RVec& z) {
      const Mat u = matrix_exponential(
          Mat(Cplx(0, -theta * encode(spec, z(0)) / 2) * pauli_x()));
      return compose(depolarizing(lambda, 2),
                     compose(dephasing(g), unitary_channel(u)));
    });
    SASModel sas = make_sas(channel, basis);
    return ChannelSystem{spec, basis, std::move(channel), std::move(sas)};
  }

  if (spec.family == "blend") {
    const double eps = spec.param("epsilon", 0.5);
    const double theta = spec.param("theta", 3.14159265358979323846);
    require_range(eps > 0.0 && eps < 1.0, "epsilon must be in (0, 1)");
    RVec pauli(3);
    pauli << spec.param("sigma_sx", 1.0), spec.param("sigma_sy", 0.0),
        spec.param("sigma_sz", 0.0);
    auto basis = std::make_shared<const GellMannBasis>(gellmann_basis(2));
    const DensityMatrix sigma = bloch_to_density(pauli_to_bloch(pauli, 2), *basis);
    ParamChannel base(2, domain_of(spec), [spec, theta](const RVec& z) {
      return unitary_channel(axis_rotation(theta * encode(spec, z(0))));
    });
    ParamChannel channel = blend(std::move(base), sigma, eps);
    SASModel sas = make_sas(channel, basis);
    return ChannelSystem{spec, basis, std::move(channel), std::move(sas)};
  }

  throw std::invalid_argument("build_system: unknown family '" + spec.family + "'");
}

}  // namespace qsas
