#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abflux/common.hpp"

namespace abflux {

/// A scalar flux function with first and second derivatives.
///
/// Two backends: coefficient-defined polynomials (analytic derivatives) and
/// tabulated natural cubic splines (central finite differences, h = 1e-6).
/// Splines are continued linearly with the boundary slope outside the table.
class ScalarFlux {
 public:
  static ScalarFlux polynomial(std::vector<double> coeffs);
  static ScalarFlux spline(std::vector<double> x, std::vector<double> y);

  double operator()(double u) const { return value(u); }
  double value(double u) const;
  double d1(double u) const;
  double d2(double u) const;

  bool is_polynomial() const { return kind_ == Kind::poly; }
  const std::vector<double>& coefficients() const { return coeff_; }

 private:
  enum class Kind { poly, spline };
  Kind kind_ = Kind::poly;
  std::vector<double> coeff_, dcoeff_, ddcoeff_;
  // spline data
  std::vector<double> sx_, sy_, sm_;  // knots, values, second derivatives
  double spline_value(double u) const;
};

struct Connection {
  double A = 0.0;
  double B = 0.0;
  double gamma = 0.0;  // common flux level f_l(A) = f_r(B)
};

/// Flux pair (f_l, f_r) with certified convexity data on eval_range.
struct ValidatedFluxPair {
  ScalarFlux fl, fr;
  double theta_l = 0.0, theta_r = 0.0;  // minimizers
  double c = 0.0;                       // sampled lower bound of min(f_l'', f_r'')
  double crossing_lo = 0.0, crossing_hi = 0.0;
  double range_lo = 0.0, range_hi = 0.0;
  bool identical = false;  // identical-flux mode (f_l == f_r)

  const ScalarFlux& flux(Side s) const { return s == Side::left ? fl : fr; }
  double f(Side s, double u) const { return flux(s).value(u); }
  double df(Side s, double u) const { return flux(s).d1(u); }
  double ddf(Side s, double u) const { return flux(s).d2(u); }
  double theta(Side s) const { return s == Side::left ? theta_l : theta_r; }
  double min_flux(Side s) const { return f(s, theta(s)); }

  /// Largest |f'| of either flux over a state interval.
  double max_speed(const StateInterval& iv) const;
};

/// Validates convexity, locates minimizers and the two flux crossings.
/// identical_mode relaxes the two-crossings requirement for f_l == f_r.
ValidatedFluxPair validate_flux_pair(ScalarFlux fl, ScalarFlux fr, double range_lo,
                                     double range_hi, bool identical_mode = false,
                                     int samples = 10000);

/// Inverse of the restriction of f_side to its decreasing (minus) or
/// increasing (plus) branch. Throws BelowMinimum for y under f(theta).
double branch_inverse(const ValidatedFluxPair& pair, Side side, Branch branch, double y);

/// Inverse of f' (globally increasing) for one side.
double speed_inverse(const ValidatedFluxPair& pair, Side side, double slope);

enum class PiKind {
  l_minus,    // f_{l,-}^{-1} o f_l
  l_plus,     // f_{l,+}^{-1} o f_l
  r_minus,    // f_{r,-}^{-1} o f_r
  r_plus,     // f_{r,+}^{-1} o f_r
  l_minus_r,  // f_{l,-}^{-1} o f_r
  l_plus_r,   // f_{l,+}^{-1} o f_r
  r_minus_l,  // f_{r,-}^{-1} o f_l
  r_plus_l,   // f_{r,+}^{-1} o f_l
};

double pi_map(const ValidatedFluxPair& pair, PiKind kind, double u);

/// Connection from its flux level: A = f_{l,-}^{-1}(gamma), B = f_{r,+}^{-1}(gamma).
Connection connection_from_level(const ValidatedFluxPair& pair, double gamma);

/// Connection from explicit states; validates Def-of-connection conditions.
Connection connection_from_states(const ValidatedFluxPair& pair, double A, double B,
                                  double tol = 1e-9);

/// The lowest admissible connection level max(f_l(theta_l), f_r(theta_r)).
double critical_level(const ValidatedFluxPair& pair);

/// State transform between a concave (traffic) flux pair and the convex
/// setting: u = -rho, f(u) = -g(-rho).
struct ConcaveAdapter {
  double rho_max = 1.0;
  double to_convex_state(double rho) const { return -rho; }
  double to_concave_state(double u) const { return -u; }
  double to_convex_level(double gamma_concave) const { return -gamma_concave; }
  double to_concave_level(double gamma_convex) const { return -gamma_convex; }
};

std::pair<ValidatedFluxPair, ConcaveAdapter> adapt_concave(const ScalarFlux& gl,
                                                           const ScalarFlux& gr,
                                                           double rho_max,
                                                           bool identical_mode = false);

/// A-priori invariant interval for data and connection inside [a, b]:
/// [min(a, pi_{l,-}^r(a)), max(b, pi_{r,+}^l(b))], with the pi term dropped
/// where the composition is undefined.
StateInterval invariant_interval(const ValidatedFluxPair& pair, const Connection& conn,
                                 double data_lo, double data_hi);

}  // namespace abflux
