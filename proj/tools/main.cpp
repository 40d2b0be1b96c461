// abflux: toolkit for scalar conservation laws with a single flux
// discontinuity under (A,B)-connection interface coupling.
//
// Subcommands: riemann, solve, check, steer, roundtrip, optimize.
// Exit codes: 0 success, 1 usage error, 2 domain error (e.g. non-member
// steering target, invalid input data).

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "abflux/attainability.hpp"
#include "abflux/controller.hpp"
#include "abflux/io.hpp"
#include "abflux/optimize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace abflux;

namespace {

struct CommonArgs {
  std::string flux_path;
  std::string conn_path;
  double tol_scale = 0.0;  // 0 = exact tolerances
};

ToleranceSet tol_from(double scale) {
  return scale > 0.0 ? ToleranceSet::scaled(scale) : ToleranceSet::exact();
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

int run_riemann(const CommonArgs& c, double a, double b, bool use_oracle, int oracle_n) {
  FluxSetup fx = load_flux_spec(c.flux_path);
  Connection conn = load_connection_spec(c.conn_path, fx);
  TracePair tp;
  if (use_oracle) {
    StateInterval iv = invariant_interval(fx.pair, conn, std::min(a, b), std::max(a, b));
    tp = riemann_oracle(fx.pair, conn, a, b,
                        make_state_grid(iv.lo - 0.5, iv.hi + 0.5, oracle_n));
  } else {
    tp = interface_traces(fx.pair, conn, a, b);
  }
  const auto cls = classify_trace_pair(fx.pair, conn, tp);
  std::cout << trace_pair_json(tp, cls.tag).dump(2) << std::endl;
  return 0;
}

int run_solve(const CommonArgs& c, const std::string& u0_path, double T, int cells,
              double cfl, double xmin, double xmax, bool pad, int frames,
              const std::string& out_dir) {
  FluxSetup fx = load_flux_spec(c.flux_path);
  Connection conn = load_connection_spec(c.conn_path, fx);
  Profile u0 = load_profile(u0_path);
  StateInterval iv = invariant_interval(fx.pair, conn, u0.min_value(), u0.max_value());
  Grid grid = pad ? make_padded_grid(xmin, xmax, cells, T, fx.pair.max_speed(iv))
                  : make_grid(xmin, xmax, cells);
  EvolveOptions opts;
  opts.cfl = cfl;
  opts.output_frames = frames;
  Field f = evolve(u0, T, fx.pair, conn, grid, opts);
  ensure_dir(out_dir);
  write_field_csv(out_dir + "/field.csv", f);
  std::ofstream(out_dir + "/summary.json") << field_summary_json(f).dump(2) << std::endl;
  std::cout << field_summary_json(f).dump(2) << std::endl;
  return 0;
}

int run_check(const CommonArgs& c, const std::string& profile_path, double T,
              const std::string& out_dir) {
  FluxSetup fx = load_flux_spec(c.flux_path);
  Connection conn = load_connection_spec(c.conn_path, fx);
  Profile w = load_profile(profile_path);
  AttainabilityReport rep = check_membership(w, T, fx.pair, conn, tol_from(c.tol_scale));
  const json j = report_to_json(rep);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(out_dir + "/report.json") << j.dump(2) << std::endl;
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int run_steer(const CommonArgs& c, const std::string& profile_path, double T,
              const std::string& out_dir, bool emit_field, int field_cells) {
  FluxSetup fx = load_flux_spec(c.flux_path);
  Connection conn = load_connection_spec(c.conn_path, fx);
  Profile w = load_profile(profile_path);
  AttainabilityReport rep = check_membership(w, T, fx.pair, conn, tol_from(c.tol_scale));
  if (!rep.member) {
    std::cout << report_to_json(rep).dump(2) << std::endl;
    std::cerr << "steer: target is not attainable at T = " << T << "\n";
    return 2;
  }
  SteeringPlan plan = steer(w, T, fx.pair, conn, rep);
  const json j = plan_to_json(plan);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(out_dir + "/plan.json") << j.dump(2) << std::endl;
    if (emit_field) {
      const double s = fx.pair.max_speed(
          invariant_interval(fx.pair, conn, w.min_value(), w.max_value()));
      const double xlo = std::min(plan.u0.domain_lo(), w.domain_lo()) - 0.5 * T * s - 0.5;
      const double xhi = std::max(plan.u0.domain_hi(), w.domain_hi()) + 0.5 * T * s + 0.5;
      Grid grid = make_grid(xlo, xhi, field_cells);
      Field f = reconstruct_field(plan, w, T, fx.pair, conn, grid, 33);
      write_field_csv(out_dir + "/reconstructed.csv", f);
    }
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int run_roundtrip(const CommonArgs& c, const std::string& profile_path, double T, int cells,
                  const std::string& out_dir) {
  FluxSetup fx = load_flux_spec(c.flux_path);
  Connection conn = load_connection_spec(c.conn_path, fx);
  Profile w = load_profile(profile_path);
  AttainabilityReport rep = check_membership(w, T, fx.pair, conn, tol_from(c.tol_scale));
  if (!rep.member) {
    std::cout << report_to_json(rep).dump(2) << std::endl;
    std::cerr << "roundtrip: target is not attainable at T = " << T << "\n";
    return 2;
  }
  SteeringPlan plan = steer(w, T, fx.pair, conn, rep);
  const double s = fx.pair.max_speed(invariant_interval(
      fx.pair, conn, std::min(w.min_value(), plan.u0.min_value()),
      std::max(w.max_value(), plan.u0.max_value())));
  const double margin = 1.0;
  const double xlo = std::min(plan.u0.domain_lo(), w.domain_lo()) - T * s - margin;
  const double xhi = std::max(plan.u0.domain_hi(), w.domain_hi()) + T * s + margin;
  Grid grid = make_grid(xlo, xhi, cells);
  Field f = evolve(plan.u0, T, fx.pair, conn, grid);
  const double wlo = w.domain_lo() - T * s, whi = w.domain_hi() + T * s;
  const double err = l1_error_vs_profile(f, f.states.size() - 1, w, wlo, whi);
  const double norm = l1_norm(w, wlo, whi);
  json j;
  j["l1_error"] = err;
  j["l1_norm"] = norm;
  j["relative_error"] = norm > 0.0 ? err / norm : err;
  j["class"] = to_string(plan.cls);
  j["cells"] = cells;
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(out_dir + "/roundtrip.json") << j.dump(2) << std::endl;
    std::ofstream(out_dir + "/plan.json") << plan_to_json(plan).dump(2) << std::endl;
    write_cells_csv(out_dir + "/final.csv", grid, f.final_state());
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int run_optimize(const std::string& problem_path, const std::string& out_dir) {
  std::ifstream in(problem_path);
  if (!in) throw ParseError("cannot open problem file: " + problem_path);
  json pj;
  try {
    in >> pj;
  } catch (const json::exception& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  FluxSetup fx = parse_flux_spec(pj.at("flux"));
  const double T = pj.at("T").get<double>();

  // admissible set; for lwr problems the boxes are densities and are mapped
  // to the convex state u = -rho (interval endpoints swap)
  AdmissibleSet set;
  const auto& gj = pj.at("G");
  const double k_lo = gj.at("K").at(0).get<double>();
  const double k_hi = gj.at("K").at(1).get<double>();
  const double g_lo = gj.at("range").at(0).get<double>();
  const double g_hi = gj.at("range").at(1).get<double>();
  const int m = gj.value("m", 20);
  if (fx.adapter)
    set = AdmissibleSet::uniform(k_lo, k_hi, -g_hi, -g_lo, m);
  else
    set = AdmissibleSet::uniform(k_lo, k_hi, g_lo, g_hi, m);

  double gamma_lo, gamma_hi;
  if (pj.contains("gamma_range")) {
    gamma_lo = pj.at("gamma_range").at(0).get<double>();
    gamma_hi = pj.at("gamma_range").at(1).get<double>();
    if (fx.adapter) {
      const double a = fx.adapter->to_convex_level(gamma_hi);
      const double b = fx.adapter->to_convex_level(gamma_lo);
      gamma_lo = a;
      gamma_hi = b;
    }
  } else {
    // default compact range from the admissible value bounds
    const auto [vlo, vhi] = set.value_range();
    gamma_lo = critical_level(fx.pair);
    gamma_hi = std::max(gamma_lo,
                        std::min(fx.pair.f(Side::left, vlo), fx.pair.f(Side::right, vhi)));
  }
  gamma_lo = std::max(gamma_lo, critical_level(fx.pair));
  gamma_hi = std::max(gamma_hi, gamma_lo);

  const auto& grid_j = pj.at("grid");
  Grid grid = make_grid(grid_j.at("xmin").get<double>(), grid_j.at("xmax").get<double>(),
                        grid_j.at("cells").get<int>());

  const auto& obj = pj.at("objective");
  const std::string kind = obj.at("kind").get<std::string>();
  double window_lo = grid.x_min, window_hi = grid.x_max;
  if (obj.contains("window")) {
    window_lo = obj.at("window").at(0).get<double>();
    window_hi = obj.at("window").at(1).get<double>();
  }

  OptimizeProblem prob;
  prob.pair = fx.pair;
  prob.adapter = fx.adapter;
  prob.controls = set;
  prob.gamma_lo = gamma_lo;
  prob.gamma_hi = gamma_hi;
  prob.T = T;
  prob.grid = grid;
  prob.budget = pj.value("budget", 2000L);
  prob.seed = pj.value("seed", 0UL);

  EvolveOptions eopts;
  eopts.output_frames = kind == "fuel" ? 33 : 2;

  if (kind == "l2") {
    Profile target = parse_profile_json(obj.at("target"));
    if (fx.adapter) {  // density target -> convex state
      std::vector<ProfilePiece> ps;
      for (auto q : target.pieces()) {
        q.u0 = -q.u0;
        q.u1 = -q.u1;
        ps.push_back(q);
      }
      target = Profile::from_pieces(ps, -target.left_tail(), -target.right_tail());
    }
    prob.objective = [=, &fx](const ControlVector& v) {
      Connection conn = connection_from_level(fx.pair, v.gamma);
      Field f = evolve(control_profile(v, set), T, fx.pair, conn, grid, eopts);
      return objective_l2(f.final_state(), grid, target, window_lo, window_hi);
    };
  } else if (kind == "fuel") {
    if (!fx.adapter) throw ParseError("fuel objective requires an lwr flux spec");
    std::vector<double> P = obj.at("P").get<std::vector<double>>();
    prob.objective = [=, &fx](const ControlVector& v) {
      Connection conn = connection_from_level(fx.pair, v.gamma);
      Field f = evolve(control_profile(v, set), T, fx.pair, conn, grid, eopts);
      auto vel = [&](double rho) { return fx.velocity(Side::left, rho); };
      return objective_fuel(f, P, vel, *fx.adapter, window_lo, window_hi, T);
    };
  } else {
    throw ParseError("objective kind must be \"l2\" or \"fuel\"");
  }

  OptimizationResult res = optimize(prob);
  json j = optimization_result_json(res);
  if (fx.adapter) {
    j["gamma_concave"] = fx.adapter->to_concave_level(res.best.gamma);
    json rho = json::array();
    for (double u : res.best.cells) rho.push_back(-u);
    j["cells_density"] = rho;
  }
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    std::ofstream(out_dir + "/result.json") << j.dump(2) << std::endl;
    Connection conn = connection_from_level(fx.pair, res.best.gamma);
    Field f = evolve(control_profile(res.best, set), T, fx.pair, conn, grid, eopts);
    write_cells_csv(out_dir + "/optimal_profile.csv", grid, f.final_state());
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AB-connection toolkit for conservation laws with discontinuous flux"};
  app.require_subcommand(1);

  CommonArgs common;
  double a = 0.0, b = 0.0, T = 1.0, cfl = 0.45, xmin = -2.0, xmax = 2.0;
  int cells = 800, frames = 17, oracle_n = 2001, field_cells = 400;
  bool use_oracle = false, pad = false, emit_field = false;
  std::string u0_path, profile_path, out_dir, problem_path;

  auto add_common = [&](CLI::App* cmd, bool with_conn = true) {
    cmd->add_option("--flux", common.flux_path, "flux spec JSON")->required();
    if (with_conn)
      cmd->add_option("--conn", common.conn_path, "connection spec JSON")->required();
    cmd->add_option("--tol-scale", common.tol_scale,
                    "checker tolerance scale (0 = exact profiles)");
  };

  auto* cmd_r = app.add_subcommand("riemann", "interface Riemann traces at x=0");
  add_common(cmd_r);
  cmd_r->add_option("--a", a, "left state")->required();
  cmd_r->add_option("--b", b, "right state")->required();
  cmd_r->add_flag("--oracle", use_oracle, "use the brute-force wave-fan oracle");
  cmd_r->add_option("--oracle-grid", oracle_n, "oracle state-grid size");

  auto* cmd_s = app.add_subcommand("solve", "evolve initial data with the Godunov scheme");
  add_common(cmd_s);
  cmd_s->add_option("--u0", u0_path, "initial profile (JSON or CSV)")->required();
  cmd_s->add_option("--T", T, "horizon")->required();
  cmd_s->add_option("--cells", cells, "number of cells");
  cmd_s->add_option("--cfl", cfl, "CFL number");
  cmd_s->add_option("--xmin", xmin, "domain left end");
  cmd_s->add_option("--xmax", xmax, "domain right end");
  cmd_s->add_flag("--pad", pad, "pad the domain by T*max|f'|");
  cmd_s->add_option("--frames", frames, "stored time levels");
  cmd_s->add_option("--out", out_dir, "output directory")->required();

  auto* cmd_c = app.add_subcommand("check", "attainability membership check");
  add_common(cmd_c);
  cmd_c->add_option("--profile", profile_path, "target profile (JSON or CSV)")->required();
  cmd_c->add_option("--T", T, "horizon")->required();
  cmd_c->add_option("--out", out_dir, "output directory");

  auto* cmd_t = app.add_subcommand("steer", "construct steering initial data");
  add_common(cmd_t);
  cmd_t->add_option("--profile", profile_path, "target profile (JSON or CSV)")->required();
  cmd_t->add_option("--T", T, "horizon")->required();
  cmd_t->add_option("--out", out_dir, "output directory");
  cmd_t->add_flag("--field-csv", emit_field, "emit the reconstructed exact field");
  cmd_t->add_option("--field-cells", field_cells, "reconstruction grid cells");

  auto* cmd_rt = app.add_subcommand("roundtrip", "steer, evolve and compare");
  add_common(cmd_rt);
  cmd_rt->add_option("--profile", profile_path, "target profile (JSON or CSV)")->required();
  cmd_rt->add_option("--T", T, "horizon")->required();
  cmd_rt->add_option("--cells", cells, "number of cells");
  cmd_rt->add_option("--out", out_dir, "output directory");

  auto* cmd_o = app.add_subcommand("optimize", "derivative-free optimization");
  cmd_o->add_option("--problem", problem_path, "problem JSON")->required();
  cmd_o->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_r->parsed()) return run_riemann(common, a, b, use_oracle, oracle_n);
    if (cmd_s->parsed())
      return run_solve(common, u0_path, T, cells, cfl, xmin, xmax, pad, frames, out_dir);
    if (cmd_c->parsed()) return run_check(common, profile_path, T, out_dir);
    if (cmd_t->parsed())
      return run_steer(common, profile_path, T, out_dir, emit_field, field_cells);
    if (cmd_rt->parsed()) return run_roundtrip(common, profile_path, T, cells, out_dir);
    if (cmd_o->parsed()) return run_optimize(problem_path, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
