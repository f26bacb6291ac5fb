#include "thermo/cli_run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <json.hpp>

#include "thermo/analysis.hpp"
#include "thermo/config.hpp"
#include "thermo/csvio.hpp"
#include "thermo/parallel.hpp"
#include "thermo/quadrature.hpp"
#include "thermo/reports.hpp"
#include "thermo/selftest.hpp"
#include "thermo/util.hpp"
#include "thermo/version.hpp"

namespace thermo {

namespace {

using nlohmann::json;

struct RunContext {
  ExperimentConfig cfg;
  std::string out_dir;
  int workers = 1;

  ConformalTorus surface;
  IntensityModel model;
  GaugeSpec gauge;
  IntegratorOptions integrator;

  GreenOptions green_options() const {
    GreenOptions g;
    g.t0_schedule = cfg.scan.t0_schedule;
    g.tol = cfg.scan.green_tol;
    g.renorm_dt = cfg.scan.renorm_dt;
    return g;
  }

  std::vector<PhasePoint> seeded_anchors(int n) const {
    std::mt19937_64 rng(cfg.scan.seed);
    std::vector<PhasePoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double x = kTwoPi * to_unit_double(rng());
      const double y = kTwoPi * to_unit_double(rng());
      const double th = kTwoPi * to_unit_double(rng());
      pts.push_back({x, y, th});
    }
    return pts;
  }

  void write_summary(const std::string& subcommand, json results) const {
    json j;
    j["subcommand"] = subcommand;
    j["version"] = kVersion;
    j["config_hash"] = cfg.config_hash();
    j["config"] = cfg.to_json();
    j["results"] = std::move(results);
    std::ofstream out(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
    out << j.dump(2) << "\n";
  }

  void write_csv(const std::string& name, const CsvTable& table) const {
    table.write_file((std::filesystem::path(out_dir) / name).string());
  }
};

std::vector<double> sample_times(double t_min, double t_max, double dt) {
  std::vector<double> ts;
  const long n = std::lround(std::floor((t_max - t_min) / dt + 1e-9));
  for (long i = 0; i <= n; ++i) ts.push_back(t_min + static_cast<double>(i) * dt);
  return ts;
}

int run_orbit(RunContext& ctx) {
  if (!ctx.cfg.orbit) throw ValidationError("orbit: missing config section 'orbit'");
  const OrbitSection& os = *ctx.cfg.orbit;
  const OrbitSegment orbit = integrate_orbit(ctx.surface, ctx.model,
                                             {os.x0, os.y0, os.theta0}, os.t_min, os.t_max,
                                             ctx.integrator);
  CsvTable csv({"t", "x", "y", "theta", "lambda", "V_lambda", "kappa_p", "big_k", "kappa_tilde"});
  for (double t : sample_times(os.t_min, os.t_max, os.sample_dt)) {
    const PhasePoint p = orbit.state(t);
    const LambdaJet jet = ctx.model.jet(ctx.surface, p);
    csv.begin_row();
    csv.add(t);
    csv.add(p.x);
    csv.add(p.y);
    csv.add(p.theta);
    csv.add(jet.lambda);
    csv.add(jet.v_lambda);
    csv.add(kappa_p(ctx.surface, ctx.model, ctx.gauge, p, jet));
    csv.add(kappa_p(ctx.surface, ctx.model, GaugeSpec::scaled_v_lambda(1.0), p, jet));
    csv.add(kappa_p(ctx.surface, ctx.model, GaugeSpec::scaled_v_lambda(0.5), p, jet));
    csv.end_row();
  }
  ctx.write_csv("orbit.csv", csv);
  ctx.write_summary("orbit", json{{"steps", orbit.stats().steps},
                                  {"rejected", orbit.stats().rejected},
                                  {"rhs_evals", orbit.stats().rhs_evals}});
  return 0;
}

int run_cocycle(RunContext& ctx) {
  if (!ctx.cfg.cocycle) throw ValidationError("cocycle: missing config section 'cocycle'");
  const CocycleSection& cs = *ctx.cfg.cocycle;
  const PhasePoint v0 = ctx.cfg.orbit
                            ? PhasePoint{ctx.cfg.orbit->x0, ctx.cfg.orbit->y0, ctx.cfg.orbit->theta0}
                            : PhasePoint{0.0, 0.0, 0.0};
  const OrbitSegment orbit =
      integrate_orbit(ctx.surface, ctx.model, v0, cs.t_min, cs.t_max, ctx.integrator);
  const GaugeSpec half = GaugeSpec::scaled_v_lambda(0.5);
  SigmaCovector xi{ctx.gauge, cs.xc0, cs.yc0, 0.0};

  std::optional<SigmaSolution> fwd, bwd;
  if (cs.t_max > 0.0) fwd = propagate_sigma_dense(orbit, ctx.gauge, xi, cs.t_max, ctx.integrator);
  if (cs.t_min < 0.0) bwd = propagate_sigma_dense(orbit, ctx.gauge, xi, cs.t_min, ctx.integrator);

  CsvTable csv({"t", "x_c", "y_c", "z", "m", "det_Gamma"});
  for (double t : sample_times(cs.t_min, cs.t_max, cs.sample_dt)) {
    std::array<double, 2> comp{cs.xc0, cs.yc0};
    if (t > 0.0 && fwd) comp = fwd->eval(t);
    if (t < 0.0 && bwd) comp = bwd->eval(t);
    const double m = orbit.damping_m(t);
    const double det_gamma =
        t == 0.0 ? 1.0
                 : cocycle_matrix(orbit, half, t, CocycleMatrix::Flavor::Gamma, ctx.integrator).det();
    csv.begin_row();
    csv.add(t);
    csv.add(comp[0]);
    csv.add(comp[1]);
    csv.add(comp[1] / m);  // z = y / m (the y component is basis independent)
    csv.add(m);
    csv.add(det_gamma);
    csv.end_row();
  }
  ctx.write_csv("cocycle.csv", csv);
  ctx.write_summary("cocycle", json{{"steps", orbit.stats().steps}});
  return 0;
}

int run_curvature_scan(RunContext& ctx) {
  const auto grid = ctx.cfg.scan.grid;
  CurvatureExtrema ex;
  const CsvTable csv =
      curvature_scan_csv(ctx.surface, ctx.model, ctx.gauge, grid, ctx.workers, &ex);
  ctx.write_csv("curvature_scan.csv", csv);
  ctx.write_summary(
      "curvature-scan",
      json{{"kappa_p", {{"min", ex.kp_min}, {"max", ex.kp_max}, {"max_abs", ex.kp_max_abs}}},
           {"big_k", {{"min", ex.bigk_min}, {"max", ex.bigk_max}, {"max_abs", ex.bigk_max_abs}}},
           {"kappa_tilde",
            {{"min", ex.ktilde_min}, {"max", ex.ktilde_max}, {"max_abs", ex.ktilde_max_abs}}},
           {"grid", grid}});
  return 0;
}

int run_conjugate_scan(RunContext& ctx) {
  const auto anchors = ctx.seeded_anchors(ctx.cfg.scan.samples);
  const double T = ctx.cfg.scan.t_max;
  std::vector<ConjugateReport> reports(anchors.size());
  parallel_for(anchors.size(), ctx.workers, [&](std::size_t i) {
    const OrbitSegment orbit =
        integrate_orbit(ctx.surface, ctx.model, anchors[i], 0.0, T, ctx.integrator);
    reports[i] = conjugate_report(orbit, T, 1e-9, ctx.integrator);
  });

  CsvTable csv({"x0", "y0", "theta0", "detector", "conjugate_time", "bracket_lo", "bracket_hi",
                "residual"});
  int detections = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.time) ++detections;
    csv.begin_row();
    csv.add(anchors[i].x);
    csv.add(anchors[i].y);
    csv.add(anchors[i].theta);
    csv.add(std::string("jacobi"));
    csv.add(r.time ? *r.time : std::nan(""));
    csv.add(r.bracket_lo);
    csv.add(r.bracket_hi);
    csv.add(r.residual);
    csv.end_row();
  }
  ctx.write_csv("conjugate_scan.csv", csv);
  ctx.write_summary("conjugate-scan", json{{"samples", static_cast<int>(anchors.size())},
                                           {"detections", detections},
                                           {"t_max", T}});
  return 0;
}

int run_green_scan(RunContext& ctx) {
  const TransversalityScan scan =
      transversality_scan(ctx.surface, ctx.model, ctx.cfg.scan.grid, ctx.gauge,
                          ctx.green_options(), ctx.integrator, ctx.workers);
  ctx.write_csv("green_scan.csv", green_scan_csv(scan));
  ctx.write_summary("green-scan", json{{"min_gap", scan.min_gap},
                                       {"max_gap", scan.max_gap},
                                       {"continuity_modulus", scan.continuity_modulus},
                                       {"non_converged", scan.non_converged},
                                       {"conjugate_flagged", scan.conjugate_flagged},
                                       {"grid", scan.grid}});
  return 0;
}

int run_lyapunov(RunContext& ctx) {
  const auto anchors = ctx.seeded_anchors(ctx.cfg.scan.samples);
  const GreenOptions gopt = ctx.green_options();
  const double T = ctx.cfg.scan.lyapunov_T;
  struct Row {
    double rs, ru, chi_s, chi_u;
  };
  std::vector<Row> rows(anchors.size());
  parallel_for(anchors.size(), ctx.workers, [&](std::size_t i) {
    const double t0max = gopt.t0_schedule.back();
    const OrbitSegment orbit =
        integrate_orbit(ctx.surface, ctx.model, anchors[i], -t0max, std::max(t0max, T),
                        ctx.integrator);
    const GreenEstimate gs = green_slope(orbit, GreenSide::Stable, ctx.gauge, gopt);
    const GreenEstimate gu = green_slope(orbit, GreenSide::Unstable, ctx.gauge, gopt);
    const SigmaCovector xs{ctx.gauge, gs.slope, 1.0, 0.0};
    const SigmaCovector xu{ctx.gauge, gu.slope, 1.0, 0.0};
    rows[i].rs = gs.slope;
    rows[i].ru = gu.slope;
    rows[i].chi_s = lyapunov_exponent(orbit, xs, T, ctx.cfg.scan.renorm_dt, gopt.transport);
    rows[i].chi_u = lyapunov_exponent(orbit, xu, T, ctx.cfg.scan.renorm_dt, gopt.transport);
  });

  CsvTable csv({"x", "y", "theta", "r_s", "r_u", "chi_s", "chi_u"});
  double mean_s = 0.0, mean_u = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv.begin_row();
    csv.add(anchors[i].x);
    csv.add(anchors[i].y);
    csv.add(anchors[i].theta);
    csv.add(rows[i].rs);
    csv.add(rows[i].ru);
    csv.add(rows[i].chi_s);
    csv.add(rows[i].chi_u);
    csv.end_row();
    mean_s += rows[i].chi_s;
    mean_u += rows[i].chi_u;
  }
  mean_s /= static_cast<double>(rows.size());
  mean_u /= static_cast<double>(rows.size());
  ctx.write_csv("lyapunov.csv", csv);
  ctx.write_summary("lyapunov",
                    json{{"mean_chi_s", mean_s}, {"mean_chi_u", mean_u}, {"T", T}});
  return 0;
}

int run_domination(RunContext& ctx) {
  const auto anchors = ctx.seeded_anchors(ctx.cfg.scan.samples);
  const DominationFit fit =
      domination_estimate(ctx.surface, ctx.model, anchors, ctx.cfg.scan.domination_T, ctx.gauge,
                          ctx.green_options(), ctx.integrator, ctx.workers);
  CsvTable csv({"sample", "t", "log_a"});
  for (std::size_t si = 0; si < fit.log_a.size(); ++si)
    for (std::size_t ti = 0; ti < fit.log_a[si].size(); ++ti) {
      csv.begin_row();
      csv.add(static_cast<long long>(si));
      csv.add(static_cast<long long>(ti + 1));
      csv.add(fit.log_a[si][ti]);
      csv.end_row();
    }
  ctx.write_csv("domination.csv", csv);
  ctx.write_summary("domination", json{{"slope", fit.slope},
                                       {"offset", fit.offset},
                                       {"per_sample_slope", fit.per_sample_slope},
                                       {"T", ctx.cfg.scan.domination_T}});
  return 0;
}

int run_hopf(RunContext& ctx) {
  const HopfReport rep =
      hopf_check(ctx.surface, ctx.model, ctx.gauge, ctx.cfg.scan.quadrature_grid, ctx.workers);
  ctx.write_summary("hopf", json{{"gauge", rep.gauge_label},
                                 {"kappa_integral", rep.kappa_integral},
                                 {"gauge_integral", rep.gauge_integral},
                                 {"margin", rep.margin},
                                 {"euler_term", rep.euler_term},
                                 {"grid", rep.grid}});
  return 0;
}

int run_selftest_cmd(RunContext& ctx) {
  const SelftestReport rep = run_selftest(ctx.workers, &std::cout);
  ctx.write_csv("selftest.csv", selftest_csv(rep));
  json results;
  results["passed"] = rep.all_passed;
  json criteria = json::array();
  for (const auto& c : rep.criteria)
    criteria.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  results["criteria"] = criteria;
  ctx.write_summary("selftest", results);
  return rep.all_passed ? 0 : 3;
}

}  // namespace

int run_cli(const CliOptions& opt) {
  try {
    RunContext ctx;
    if (!opt.config_path.empty()) {
      ctx.cfg = ExperimentConfig::from_file(opt.config_path);
    } else if (opt.subcommand != "selftest") {
      throw ValidationError("--config is required for subcommand '" + opt.subcommand + "'");
    }
    if (opt.seed) ctx.cfg.scan.seed = *opt.seed;
    ctx.out_dir = opt.out_dir;
    ctx.workers = opt.workers > 0 ? opt.workers : default_worker_count();
    std::filesystem::create_directories(ctx.out_dir);
    ctx.surface = ctx.cfg.build_surface();
    ctx.model = ctx.cfg.build_intensity();
    ctx.gauge = ctx.cfg.build_gauge();
    ctx.integrator = ctx.cfg.build_integrator();

    if (opt.subcommand == "orbit") return run_orbit(ctx);
    if (opt.subcommand == "cocycle") return run_cocycle(ctx);
    if (opt.subcommand == "curvature-scan") return run_curvature_scan(ctx);
    if (opt.subcommand == "conjugate-scan") return run_conjugate_scan(ctx);
    if (opt.subcommand == "green-scan") return run_green_scan(ctx);
    if (opt.subcommand == "lyapunov") return run_lyapunov(ctx);
    if (opt.subcommand == "domination") return run_domination(ctx);
    if (opt.subcommand == "hopf") return run_hopf(ctx);
    if (opt.subcommand == "selftest") return run_selftest_cmd(ctx);
    throw ValidationError("unknown subcommand '" + opt.subcommand + "'");
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace thermo
