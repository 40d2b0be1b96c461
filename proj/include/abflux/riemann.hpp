#pragma once

#include <string>
#include <vector>

#include "abflux/fluxes.hpp"

namespace abflux {

/// One-sided limits at x = 0 together with their common flux value.
struct TracePair {
  double u_l = 0.0;
  double u_r = 0.0;
  double flux = 0.0;
};

enum class TraceClass { T1, T2, T3minus, T3plus, AB, inadmissible };

std::string to_string(TraceClass c);

struct TraceClassification {
  TraceClass tag = TraceClass::inadmissible;
  std::vector<std::string> near_boundary;  // inequalities within tolerance of equality
};

/// Exact Godunov flux for one convex flux with minimizer theta:
/// max( f(max(a, theta)), f(min(b, theta)) ).
double godunov_flux_classical(const ScalarFlux& f, double theta, double a, double b);
double godunov_flux_classical(const ValidatedFluxPair& pair, Side side, double a, double b);

/// Godunov flux of the AB interface Riemann solver at x = 0:
/// max( gamma, f_l(max(a, theta_l)), f_r(min(b, theta_r)) ).
double interface_flux_AB(const ValidatedFluxPair& pair, const Connection& conn, double a,
                         double b);

/// Traces of the AB interface Riemann solution with data (a, b).
TracePair interface_traces(const ValidatedFluxPair& pair, const Connection& conn, double a,
                           double b);

/// Whether (u_l, u_r) belongs to one trace set, with the written strict /
/// non-strict inequality semantics and per-inequality tolerance. Inequalities
/// within tol of equality are appended to boundary_log when non-null.
bool trace_set_contains(const ValidatedFluxPair& pair, const Connection& conn,
                        TraceClass set, double u_l, double u_r, double tol,
                        std::vector<std::string>* boundary_log = nullptr);

/// Classifies a trace pair into T1 / T2 / T3- / T3+ / AB / inadmissible.
TraceClassification classify_trace_pair(const ValidatedFluxPair& pair,
                                        const Connection& conn, const TracePair& tp,
                                        double tol = 1e-9);

/// Uniform grid of n states over [lo, hi].
std::vector<double> make_state_grid(double lo, double hi, int n);

/// Brute-force interface Riemann solver: enumerates candidate trace pairs on
/// u_grid, keeps pairs reachable from a by non-positive-speed admissible left
/// waves and from b by non-negative-speed admissible right waves subject to
/// the interface entropy condition, then sharpens the surviving pair by local
/// grid refinement. Independent of interface_flux_AB / interface_traces.
TracePair riemann_oracle(const ValidatedFluxPair& pair, const Connection& conn, double a,
                         double b, const std::vector<double>& u_grid);

}  // namespace abflux
