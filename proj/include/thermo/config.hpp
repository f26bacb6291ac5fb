#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermo/dopri5.hpp"
#include "thermo/intensity.hpp"
#include "thermo/surface.hpp"

namespace thermo {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModeCoeff {
  int jx = 0;
  int ky = 0;
  std::string basis = "cc";
  double c = 0.0;
};

struct ThetaModeSpec {
  int k = 0;
  std::vector<ModeCoeff> coeffs;
};

struct IntensitySection {
  int theta_degree = 0;
  std::vector<ThetaModeSpec> cos_modes;
  std::vector<ThetaModeSpec> sin_modes;
};

struct GaugeSection {
  std::string kind = "scaled_v_lambda";  // zero | scaled_v_lambda | custom
  double factor = 1.0;
  std::optional<IntensitySection> table;
};

struct IntegratorSection {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.0;  // 0 = unlimited
};

struct OrbitSection {
  double x0 = 0.0, y0 = 0.0, theta0 = 0.0;
  double t_min = 0.0, t_max = 10.0;
  double sample_dt = 0.1;
};

struct CocycleSection {
  double xc0 = 1.0, yc0 = 0.0;
  double t_min = -5.0, t_max = 5.0;
  double sample_dt = 0.1;
};

struct ScanSection {
  std::array<int, 3> grid{8, 8, 8};
  double t_max = 40.0;
  std::vector<double> t0_schedule{2.0, 4.0, 8.0, 16.0, 32.0};
  double green_tol = 1e-8;
  int samples = 20;
  std::uint64_t seed = 1;
  double lyapunov_T = 30.0;
  double renorm_dt = 1.0;
  int domination_T = 20;
  std::array<int, 3> quadrature_grid{32, 32, 32};
};

struct ExperimentConfig {
  std::vector<ModeCoeff> surface_f;
  IntensitySection intensity;
  GaugeSection gauge;
  IntegratorSection integrator;
  std::optional<OrbitSection> orbit;
  std::optional<CocycleSection> cocycle;
  ScanSection scan;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;  // fully resolved (defaults materialized)
  std::string config_hash() const;

  ConformalTorus build_surface() const;
  IntensityModel build_intensity() const;
  GaugeSpec build_gauge() const;
  IntegratorOptions build_integrator() const;
};

}  // namespace thermo
