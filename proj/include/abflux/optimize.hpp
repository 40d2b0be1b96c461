#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "abflux/fluxes.hpp"
#include "abflux/profile.hpp"
#include "abflux/solver.hpp"

namespace abflux {

/// Box-valued admissible set G(x): piecewise-constant boxes over the support
/// K, and {0} outside.
struct AdmissibleSet {
  struct Box {
    double x_lo = 0.0, x_hi = 0.0;
    double lo = 0.0, hi = 0.0;
  };
  std::vector<Box> boxes;        // ordered, cover K
  double support_lo = 0.0, support_hi = 0.0;

  static AdmissibleSet uniform(double k_lo, double k_hi, double lo, double hi, int m);
  std::pair<double, double> bounds_at(double x) const;
  std::pair<double, double> value_range() const;
};

/// m piecewise-constant cell values on the support partition, plus the
/// connection level.
struct ControlVector {
  std::vector<double> cells;
  double gamma = 0.0;
};

struct OptimizationResult {
  ControlVector best;
  double J = 0.0;
  std::vector<std::pair<long, double>> history;  // (evaluation index, best-so-far J)
  long evaluations = 0;
};

/// Componentwise clamp into the admissible boxes and the gamma range.
ControlVector project(const ControlVector& v, const AdmissibleSet& set, double gamma_lo,
                      double gamma_hi);

/// Control cells as a profile over the support (0 outside).
Profile control_profile(const ControlVector& v, const AdmissibleSet& set);

/// Integral of |profile - target|^2 over the window, midpoint rule at dx.
double objective_l2(const Profile& profile, const Profile& target, double window_lo,
                    double window_hi, double dx);
double objective_l2(const std::vector<double>& cells, const Grid& grid,
                    const Profile& target, double window_lo, double window_hi);

/// Integral of rho P(v(rho)) over window x [0, horizon]; trapezoid in time
/// over the stored levels, cells in space. The field stores the convex-state
/// trajectory; the adapter maps back to densities.
double objective_fuel(const Field& field, const std::vector<double>& P_coeffs,
                      const std::function<double(double)>& velocity,
                      const ConcaveAdapter& adapter, double window_lo, double window_hi,
                      double horizon);

struct OptimizeProblem {
  ValidatedFluxPair pair;
  std::optional<ConcaveAdapter> adapter;  // set for LWR (concave) problems
  AdmissibleSet controls;                 // in solver (convex) state units
  double gamma_lo = 0.0, gamma_hi = 0.0;  // connection-level range (convex units)
  double T = 1.0;
  Grid grid;
  long budget = 2000;
  std::uint64_t seed = 0;
  // J(control) — typically wraps a solver run plus one of the objectives
  std::function<double(const ControlVector&)> objective;
};

/// Projected Nelder-Mead with uniform random restarts; deterministic under a
/// fixed seed.
OptimizationResult optimize(const OptimizeProblem& problem);

}  // namespace abflux
