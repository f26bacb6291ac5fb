#include "thermo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "thermo/util.hpp"

namespace thermo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void require_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail(path + "." + item.key(), "unknown key");
}

double get_number(const json& j, const std::string& path, const std::string& key,
                  std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required number");
  }
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path + "." + key, "must be finite");
  return d;
}

int get_int(const json& j, const std::string& path, const std::string& key,
            std::optional<int> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required integer");
  }
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required string");
  }
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<ModeCoeff> parse_coeff_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of mode coefficients");
  std::vector<ModeCoeff> out;
  int i = 0;
  for (const auto& item : j) {
    const std::string ipath = path + "[" + std::to_string(i++) + "]";
    require_keys(item, ipath, {"jx", "ky", "basis", "c"});
    ModeCoeff m;
    m.jx = get_int(item, ipath, "jx");
    m.ky = get_int(item, ipath, "ky");
    m.basis = get_string(item, ipath, "basis");
    m.c = get_number(item, ipath, "c");
    if (m.jx < 0 || m.jx > FourierField2::kMaxDegree || m.ky < 0 ||
        m.ky > FourierField2::kMaxDegree)
      fail(ipath, "mode indices must lie in [0, 32]");
    try {
      trig_basis_from_tag(m.basis);
    } catch (const std::exception& e) {
      fail(ipath + ".basis", e.what());
    }
    out.push_back(std::move(m));
  }
  return out;
}

IntensitySection parse_intensity(const json& j, const std::string& path) {
  require_keys(j, path, {"theta_degree", "cos_modes", "sin_modes"});
  IntensitySection s;
  s.theta_degree = get_int(j, path, "theta_degree", 0);
  if (s.theta_degree < 0 || s.theta_degree > FourierField2::kMaxDegree)
    fail(path + ".theta_degree", "must lie in [0, 32]");
  auto parse_modes = [&](const char* key) {
    std::vector<ThetaModeSpec> modes;
    if (!j.contains(key)) return modes;
    const json& arr = j.at(key);
    if (!arr.is_array()) fail(path + "." + key, "expected an array");
    int i = 0;
    for (const auto& item : arr) {
      const std::string ipath = path + "." + key + "[" + std::to_string(i++) + "]";
      require_keys(item, ipath, {"k", "coeffs"});
      ThetaModeSpec m;
      m.k = get_int(item, ipath, "k");
      if (m.k < 0 || m.k > s.theta_degree)
        fail(ipath + ".k", "mode index must lie in [0, theta_degree]");
      if (!item.contains("coeffs")) fail(ipath + ".coeffs", "missing required array");
      m.coeffs = parse_coeff_list(item.at("coeffs"), ipath + ".coeffs");
      modes.push_back(std::move(m));
    }
    return modes;
  };
  s.cos_modes = parse_modes("cos_modes");
  s.sin_modes = parse_modes("sin_modes");
  return s;
}

json coeff_list_json(const std::vector<ModeCoeff>& coeffs) {
  json arr = json::array();
  for (const auto& m : coeffs)
    arr.push_back({{"jx", m.jx}, {"ky", m.ky}, {"basis", m.basis}, {"c", m.c}});
  return arr;
}

json intensity_json(const IntensitySection& s) {
  json cos_modes = json::array(), sin_modes = json::array();
  for (const auto& m : s.cos_modes)
    cos_modes.push_back({{"k", m.k}, {"coeffs", coeff_list_json(m.coeffs)}});
  for (const auto& m : s.sin_modes)
    sin_modes.push_back({{"k", m.k}, {"coeffs", coeff_list_json(m.coeffs)}});
  return {{"theta_degree", s.theta_degree}, {"cos_modes", cos_modes}, {"sin_modes", sin_modes}};
}

std::array<int, 3> parse_grid(const json& j, const std::string& path, const std::string& key,
                              std::array<int, 3> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) fail(path + "." + key, "expected an array of 3 integers");
  std::array<int, 3> g{};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer()) fail(path + "." + key, "expected an array of 3 integers");
    g[i] = v[i].get<int>();
    if (g[i] < 1) fail(path + "." + key, "grid sizes must be positive");
  }
  return g;
}

FourierField2 build_field(const std::vector<ModeCoeff>& coeffs) {
  FourierField2 f;
  for (const auto& m : coeffs) f.add_coefficient(m.jx, m.ky, trig_basis_from_tag(m.basis), m.c);
  return f;
}

IntensityModel build_intensity_section(const IntensitySection& s) {
  IntensityModel model(s.theta_degree);
  for (const auto& m : s.cos_modes) model.set_cos_field(m.k, build_field(m.coeffs));
  for (const auto& m : s.sin_modes) model.set_sin_field(m.k, build_field(m.coeffs));
  return model;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_keys(j, "config",
               {"surface", "intensity", "gauge", "integrator", "orbit", "cocycle", "scan"});
  ExperimentConfig cfg;

  if (j.contains("surface")) {
    require_keys(j.at("surface"), "surface", {"f"});
    if (j.at("surface").contains("f"))
      cfg.surface_f = parse_coeff_list(j.at("surface").at("f"), "surface.f");
  }
  if (j.contains("intensity")) cfg.intensity = parse_intensity(j.at("intensity"), "intensity");

  if (j.contains("gauge")) {
    const json& g = j.at("gauge");
    require_keys(g, "gauge", {"kind", "factor", "table"});
    cfg.gauge.kind = get_string(g, "gauge", "kind", std::string("scaled_v_lambda"));
    if (cfg.gauge.kind != "zero" && cfg.gauge.kind != "scaled_v_lambda" &&
        cfg.gauge.kind != "custom")
      fail("gauge.kind", "expected one of zero|scaled_v_lambda|custom");
    cfg.gauge.factor = get_number(g, "gauge", "factor", 1.0);
    if (g.contains("table")) cfg.gauge.table = parse_intensity(g.at("table"), "gauge.table");
    if (cfg.gauge.kind == "custom" && !cfg.gauge.table)
      fail("gauge.table", "custom gauges need a table");
  }

  if (j.contains("integrator")) {
    const json& g = j.at("integrator");
    require_keys(g, "integrator", {"rel_tol", "abs_tol", "max_step"});
    cfg.integrator.rel_tol = get_number(g, "integrator", "rel_tol", cfg.integrator.rel_tol);
    cfg.integrator.abs_tol = get_number(g, "integrator", "abs_tol", cfg.integrator.abs_tol);
    cfg.integrator.max_step = get_number(g, "integrator", "max_step", cfg.integrator.max_step);
    if (!(cfg.integrator.rel_tol > 0.0)) fail("integrator.rel_tol", "must be positive");
    if (!(cfg.integrator.abs_tol > 0.0)) fail("integrator.abs_tol", "must be positive");
    if (cfg.integrator.max_step < 0.0) fail("integrator.max_step", "must be non-negative");
  }

  if (j.contains("orbit")) {
    const json& g = j.at("orbit");
    require_keys(g, "orbit", {"x0", "y0", "theta0", "t_min", "t_max", "sample_dt"});
    OrbitSection s;
    s.x0 = get_number(g, "orbit", "x0", 0.0);
    s.y0 = get_number(g, "orbit", "y0", 0.0);
    s.theta0 = get_number(g, "orbit", "theta0", 0.0);
    s.t_min = get_number(g, "orbit", "t_min", 0.0);
    s.t_max = get_number(g, "orbit", "t_max", 10.0);
    s.sample_dt = get_number(g, "orbit", "sample_dt", 0.1);
    if (!(s.t_min <= 0.0 && s.t_max >= 0.0)) fail("orbit", "span must contain t = 0");
    if (!(s.sample_dt > 0.0)) fail("orbit.sample_dt", "must be positive");
    cfg.orbit = s;
  }

  if (j.contains("cocycle")) {
    const json& g = j.at("cocycle");
    require_keys(g, "cocycle", {"xc0", "yc0", "t_min", "t_max", "sample_dt"});
    CocycleSection s;
    s.xc0 = get_number(g, "cocycle", "xc0", 1.0);
    s.yc0 = get_number(g, "cocycle", "yc0", 0.0);
    s.t_min = get_number(g, "cocycle", "t_min", -5.0);
    s.t_max = get_number(g, "cocycle", "t_max", 5.0);
    s.sample_dt = get_number(g, "cocycle", "sample_dt", 0.1);
    if (!(s.t_min <= 0.0 && s.t_max >= 0.0)) fail("cocycle", "span must contain t = 0");
    if (!(s.sample_dt > 0.0)) fail("cocycle.sample_dt", "must be positive");
    cfg.cocycle = s;
  }

  if (j.contains("scan")) {
    const json& g = j.at("scan");
    require_keys(g, "scan",
                 {"grid", "t_max", "t0_schedule", "green_tol", "samples", "seed", "lyapunov_T",
                  "renorm_dt", "domination_T", "quadrature_grid"});
    ScanSection s;
    s.grid = parse_grid(g, "scan", "grid", s.grid);
    s.t_max = get_number(g, "scan", "t_max", s.t_max);
    if (g.contains("t0_schedule")) {
      const json& sched = g.at("t0_schedule");
      if (!sched.is_array() || sched.empty())
        fail("scan.t0_schedule", "expected a non-empty array of numbers");
      s.t0_schedule.clear();
      double prev = 0.0;
      for (const auto& v : sched) {
        if (!v.is_number()) fail("scan.t0_schedule", "expected numbers");
        const double t0 = v.get<double>();
        if (!(t0 > prev)) fail("scan.t0_schedule", "entries must be positive and increasing");
        s.t0_schedule.push_back(t0);
        prev = t0;
      }
    }
    s.green_tol = get_number(g, "scan", "green_tol", s.green_tol);
    s.samples = get_int(g, "scan", "samples", s.samples);
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_unsigned() && !g.at("seed").is_number_integer())
        fail("scan.seed", "expected an unsigned integer");
      s.seed = g.at("seed").get<std::uint64_t>();
    }
    s.lyapunov_T = get_number(g, "scan", "lyapunov_T", s.lyapunov_T);
    s.renorm_dt = get_number(g, "scan", "renorm_dt", s.renorm_dt);
    s.domination_T = get_int(g, "scan", "domination_T", s.domination_T);
    s.quadrature_grid = parse_grid(g, "scan", "quadrature_grid", s.quadrature_grid);
    if (!(s.t_max > 0.0)) fail("scan.t_max", "must be positive");
    if (!(s.green_tol > 0.0)) fail("scan.green_tol", "must be positive");
    if (s.samples < 1) fail("scan.samples", "must be at least 1");
    if (!(s.renorm_dt > 0.0)) fail("scan.renorm_dt", "must be positive");
    if (s.domination_T < 2) fail("scan.domination_T", "must be at least 2");
    cfg.scan = s;
  }

  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["surface"] = {{"f", coeff_list_json(surface_f)}};
  j["intensity"] = intensity_json(intensity);
  j["gauge"] = {{"kind", gauge.kind}, {"factor", gauge.factor}};
  if (gauge.table) j["gauge"]["table"] = intensity_json(*gauge.table);
  j["integrator"] = {{"rel_tol", integrator.rel_tol},
                     {"abs_tol", integrator.abs_tol},
                     {"max_step", integrator.max_step}};
  if (orbit)
    j["orbit"] = {{"x0", orbit->x0},       {"y0", orbit->y0},
                  {"theta0", orbit->theta0}, {"t_min", orbit->t_min},
                  {"t_max", orbit->t_max},   {"sample_dt", orbit->sample_dt}};
  if (cocycle)
    j["cocycle"] = {{"xc0", cocycle->xc0},     {"yc0", cocycle->yc0},
                    {"t_min", cocycle->t_min}, {"t_max", cocycle->t_max},
                    {"sample_dt", cocycle->sample_dt}};
  j["scan"] = {{"grid", scan.grid},
               {"t_max", scan.t_max},
               {"t0_schedule", scan.t0_schedule},
               {"green_tol", scan.green_tol},
               {"samples", scan.samples},
               {"seed", scan.seed},
               {"lyapunov_T", scan.lyapunov_T},
               {"renorm_dt", scan.renorm_dt},
               {"domination_T", scan.domination_T},
               {"quadrature_grid", scan.quadrature_grid}};
  return j;
}

std::string ExperimentConfig::config_hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json().dump())));
  return buf;
}

ConformalTorus ExperimentConfig::build_surface() const {
  return ConformalTorus(build_field(surface_f));
}

IntensityModel ExperimentConfig::build_intensity() const {
  return build_intensity_section(intensity);
}

GaugeSpec ExperimentConfig::build_gauge() const {
  if (gauge.kind == "zero") return GaugeSpec::zero();
  if (gauge.kind == "scaled_v_lambda") return GaugeSpec::scaled_v_lambda(gauge.factor);
  return GaugeSpec::custom(build_intensity_section(*gauge.table));
}

IntegratorOptions ExperimentConfig::build_integrator() const {
  IntegratorOptions opt;
  opt.rel_tol = integrator.rel_tol;
  opt.abs_tol = integrator.abs_tol;
  opt.max_step = integrator.max_step > 0.0 ? integrator.max_step
                                           : std::numeric_limits<double>::infinity();
  return opt;
}

}  // namespace thermo
