#include "abflux/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace abflux {

using nlohmann::json;

double FluxSetup::velocity(Side side, double rho) const {
  const double vmax = side == Side::left ? vmax_l : vmax_r;
  if (rho_max <= 0.0) throw DomainError("velocity map requires an lwr flux spec");
  return vmax * (1.0 - rho / rho_max);
}

namespace {

ScalarFlux flux_from_json(const json& j) {
  if (j.contains("poly")) {
    std::vector<double> c = j.at("poly").get<std::vector<double>>();
    return ScalarFlux::polynomial(std::move(c));
  }
  if (j.contains("spline")) {
    const auto& s = j.at("spline");
    return ScalarFlux::spline(s.at("x").get<std::vector<double>>(),
                              s.at("y").get<std::vector<double>>());
  }
  throw ParseError("flux entry needs \"poly\" or \"spline\"");
}

}  // namespace

FluxSetup parse_flux_spec(const json& j) {
  FluxSetup fx;
  if (j.contains("lwr")) {
    const auto& l = j.at("lwr");
    const double rho_max = l.at("rhomax").get<double>();
    double vl, vr;
    if (l.at("vmax").is_array()) {
      vl = l.at("vmax").at(0).get<double>();
      vr = l.at("vmax").at(1).get<double>();
    } else {
      vl = vr = l.at("vmax").get<double>();
    }
    const std::string shape = l.value("shape", "greenshields");
    if (shape != "greenshields")
      throw ParseError("unsupported lwr shape: " + shape);
    // g(rho) = vmax rho (1 - rho/rhomax)
    ScalarFlux gl = ScalarFlux::polynomial({0.0, vl, -vl / rho_max});
    ScalarFlux gr = ScalarFlux::polynomial({0.0, vr, -vr / rho_max});
    auto [pair, adapter] = adapt_concave(gl, gr, rho_max, vl == vr);
    fx.pair = std::move(pair);
    fx.adapter = adapter;
    fx.vmax_l = vl;
    fx.vmax_r = vr;
    fx.rho_max = rho_max;
    return fx;
  }
  if (!j.contains("fl") || !j.contains("fr") || !j.contains("range"))
    throw ParseError("flux spec needs \"fl\", \"fr\" and \"range\" (or \"lwr\")");
  const double lo = j.at("range").at(0).get<double>();
  const double hi = j.at("range").at(1).get<double>();
  fx.pair = validate_flux_pair(flux_from_json(j.at("fl")), flux_from_json(j.at("fr")), lo, hi,
                               j.value("identical", false));
  return fx;
}

FluxSetup load_flux_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open flux spec: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("flux spec " + path + ": " + e.what());
  }
  return parse_flux_spec(j);
}

Connection parse_connection_spec(const json& j, const FluxSetup& fx) {
  if (j.contains("gamma")) {
    double g = j.at("gamma").get<double>();
    if (fx.adapter) g = fx.adapter->to_convex_level(g);
    return connection_from_level(fx.pair, g);
  }
  if (j.contains("A") && j.contains("B")) {
    double A = j.at("A").get<double>();
    double B = j.at("B").get<double>();
    if (fx.adapter) {
      A = fx.adapter->to_convex_state(A);
      B = fx.adapter->to_convex_state(B);
    }
    return connection_from_states(fx.pair, A, B);
  }
  if (j.contains("critical") && j.at("critical").get<bool>())
    return connection_from_level(fx.pair, critical_level(fx.pair));
  throw ParseError("connection spec needs \"gamma\", \"A\"/\"B\" or \"critical\"");
}

Connection load_connection_spec(const std::string& path, const FluxSetup& fx) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open connection spec: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("connection spec " + path + ": " + e.what());
  }
  return parse_connection_spec(j, fx);
}

Profile parse_profile_json(const json& j) {
  try {
    std::vector<ProfilePiece> pieces;
    for (const auto& row : j.at("pieces")) {
      if (row.size() != 4) throw ParseError("profile piece rows are [x0,x1,u0,u1]");
      pieces.push_back(ProfilePiece{row.at(0).get<double>(), row.at(1).get<double>(),
                                    row.at(2).get<double>(), row.at(3).get<double>()});
    }
    return Profile::from_pieces(std::move(pieces), j.at("left_tail").get<double>(),
                                j.at("right_tail").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("profile json: ") + e.what());
  }
}

json profile_to_json(const Profile& p) {
  json j;
  j["pieces"] = json::array();
  for (const auto& q : p.pieces()) j["pieces"].push_back({q.x0, q.x1, q.u0, q.u1});
  j["left_tail"] = p.left_tail();
  j["right_tail"] = p.right_tail();
  return j;
}

Profile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile: " + path);
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    std::vector<double> xs, us;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, u;
      if (!(ls >> x >> u))
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"x,u\"");
      xs.push_back(x);
      us.push_back(u);
    }
    return Profile::from_samples(xs, us);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("profile " + path + ": " + e.what());
  }
  return parse_profile_json(j);
}

json report_to_json(const AttainabilityReport& rep) {
  json j;
  j["verdict"] = rep.member ? "member" : "not_member";
  j["class"] = to_string(rep.cls);
  j["trace_class"] = to_string(rep.trace_tag);
  if (rep.L) j["L"] = *rep.L;
  if (rep.R) j["R"] = *rep.R;
  j["violations"] = json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back({{"condition", v.condition}, {"x", v.x}, {"margin", v.margin}});
  j["boundary_log"] = rep.boundary_log;
  j["tolerances"] = {{"ineq", rep.tol.ineq},
                     {"mono", rep.tol.mono},
                     {"strict", rep.tol.strict_margin},
                     {"jump", rep.tol.jump},
                     {"trace", rep.tol.trace},
                     {"plateau", rep.tol.plateau},
                     {"wedge", rep.tol.wedge}};
  return j;
}

json plan_to_json(const SteeringPlan& plan) {
  json j;
  j["class"] = to_string(plan.cls);
  j["trace_class"] = to_string(plan.trace_tag);
  j["T"] = plan.T;
  j["L"] = plan.L;
  j["R"] = plan.R;
  j["u0"] = profile_to_json(plan.u0);
  json part;
  part["rarefaction_centers"] = plan.partition.rarefaction_centers;
  part["compressions"] = json::array();
  for (const auto& ci : plan.partition.compressions)
    part["compressions"].push_back({{"x_lo", ci.x_lo},
                                    {"x_hi", ci.x_hi},
                                    {"y", ci.y},
                                    {"crossing", ci.crossing},
                                    {"side", ci.side == Side::left ? "left" : "right"}});
  part["plateaus"] = json::array();
  for (const auto& pl : plan.partition.plateaus)
    part["plateaus"].push_back(
        {{"x_lo", pl.x_lo}, {"x_hi", pl.x_hi}, {"value", pl.value}, {"label", pl.label}});
  part["wave_intervals"] = json::array();
  for (const auto& wi : plan.partition.wave_intervals)
    part["wave_intervals"].push_back({wi.first, wi.second});
  j["partition"] = part;
  j["diagnostics"] = {{"max_alpha_residual", plan.diagnostics.max_alpha_residual},
                      {"min_foot_gap", plan.diagnostics.min_foot_gap},
                      {"u0_sup", plan.diagnostics.u0_sup},
                      {"u0_bound", plan.diagnostics.u0_bound}};
  return j;
}

json field_summary_json(const Field& f) {
  json j;
  j["grid"] = {{"x_min", f.grid.x_min},
               {"x_max", f.grid.x_max},
               {"n_cells", f.grid.n_cells},
               {"dx", f.grid.dx},
               {"interface_edge", f.grid.interface_edge}};
  j["times"] = f.times;
  j["mass_initial"] = f.mass_initial;
  j["max_mass_drift"] = f.max_mass_drift;
  j["bound"] = {f.bound.lo, f.bound.hi};
  j["min_interface_flux"] = f.min_interface_flux;
  j["steps"] = f.steps;
  j["exact"] = f.exact;
  j["trace_history"] = json::array();
  for (std::size_t k = 0; k < f.times.size(); ++k)
    j["trace_history"].push_back({{"t", f.times[k]},
                                  {"u_l", f.trace_history[k].u_l},
                                  {"u_r", f.trace_history[k].u_r},
                                  {"flux", f.trace_history[k].flux}});
  return j;
}

json trace_pair_json(const TracePair& tp, TraceClass cls) {
  return json{{"flux", tp.flux}, {"u_l", tp.u_l}, {"u_r", tp.u_r}, {"class", to_string(cls)}};
}

json optimization_result_json(const OptimizationResult& r) {
  json j;
  j["J"] = r.J;
  j["gamma"] = r.best.gamma;
  j["cells"] = r.best.cells;
  j["evaluations"] = r.evaluations;
  j["history"] = json::array();
  for (const auto& h : r.history) j["history"].push_back({h.first, h.second});
  return j;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "t,x,u\n";
  out.precision(17);
  for (std::size_t k = 0; k < f.times.size(); ++k)
    for (int i = 0; i < f.grid.n_cells; ++i)
      out << f.times[k] << ',' << f.grid.center(i) << ','
          << f.states[k][static_cast<std::size_t>(i)] << '\n';
}

void write_profile_csv(const std::string& path, const Profile& p, double lo, double hi,
                       int samples) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x,u\n";
  out.precision(17);
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    out << x << ',' << p.value(x) << '\n';
  }
}

void write_cells_csv(const std::string& path, const Grid& grid,
                     const std::vector<double>& cells) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x,u\n";
  out.precision(17);
  for (int i = 0; i < grid.n_cells; ++i)
    out << grid.center(i) << ',' << cells[static_cast<std::size_t>(i)] << '\n';
}

}  // namespace abflux
