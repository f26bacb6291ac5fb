#pragma once

#include <array>

#include "thermo/analysis.hpp"
#include "thermo/csvio.hpp"

namespace thermo {

struct CurvatureExtrema {
  double kp_min = 0.0, kp_max = 0.0, kp_max_abs = 0.0;
  double bigk_min = 0.0, bigk_max = 0.0, bigk_max_abs = 0.0;
  double ktilde_min = 0.0, ktilde_max = 0.0, ktilde_max_abs = 0.0;
};

// Curvature gauges over a uniform grid through the batch path; the CSV text
// is a pure function of the inputs (independent of the worker count).
CsvTable curvature_scan_csv(const ConformalTorus& surface, const IntensityModel& model,
                            const GaugeSpec& gauge, std::array<int, 3> grid, int workers,
                            CurvatureExtrema* extrema = nullptr);

CsvTable green_scan_csv(const TransversalityScan& scan);

}  // namespace thermo
