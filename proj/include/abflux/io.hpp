#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "abflux/attainability.hpp"
#include "abflux/controller.hpp"
#include "abflux/fluxes.hpp"
#include "abflux/optimize.hpp"
#include "abflux/profile.hpp"
#include "abflux/solver.hpp"

namespace abflux {

/// Parsed flux specification. For LWR (concave) specs the pair is already
/// transformed to the convex setting and the adapter is set.
struct FluxSetup {
  ValidatedFluxPair pair;
  std::optional<ConcaveAdapter> adapter;
  double vmax_l = 0.0, vmax_r = 0.0, rho_max = 0.0;  // lwr parameters

  double velocity(Side side, double rho) const;  // lwr speed-density relation
};

// flux spec: {"fl":{"poly":[...]} , "fr":{...}, "range":[lo,hi], "identical":bool}
//         or {"lwr":{"vmax": v | [vl,vr], "rhomax": r, "shape":"greenshields"}}
FluxSetup parse_flux_spec(const nlohmann::json& j);
FluxSetup load_flux_spec(const std::string& path);

// connection spec: {"gamma": g} or {"A": a, "B": b}; for lwr setups the
// values are in the concave (density/flow) units and are converted.
Connection parse_connection_spec(const nlohmann::json& j, const FluxSetup& fx);
Connection load_connection_spec(const std::string& path, const FluxSetup& fx);

// profile: {"pieces":[[x0,x1,u0,u1],...], "left_tail":a, "right_tail":b}
Profile parse_profile_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const Profile& p);
// .json breakpoint file or .csv of "x,u" samples
Profile load_profile(const std::string& path);

nlohmann::json report_to_json(const AttainabilityReport& rep);
nlohmann::json plan_to_json(const SteeringPlan& plan);
nlohmann::json field_summary_json(const Field& f);
nlohmann::json trace_pair_json(const TracePair& tp, TraceClass cls);
nlohmann::json optimization_result_json(const OptimizationResult& r);

void write_field_csv(const std::string& path, const Field& f);
void write_profile_csv(const std::string& path, const Profile& p, double lo, double hi,
                       int samples);
void write_cells_csv(const std::string& path, const Grid& grid,
                     const std::vector<double>& cells);

}  // namespace abflux
