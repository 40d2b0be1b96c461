#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "abflux/attainability.hpp"
#include "abflux/fluxes.hpp"
#include "abflux/profile.hpp"
#include "abflux/riemann.hpp"
#include "abflux/solver.hpp"

namespace abflux::testing {

// f_l = u^2/2, f_r = u^2 - u/2: theta_l = 0, theta_r = 1/4, crossings {0, 1}.
inline ValidatedFluxPair quadratic_pair(double lo = -3.0, double hi = 3.0) {
  return validate_flux_pair(ScalarFlux::polynomial({0.0, 0.0, 0.5}),
                            ScalarFlux::polynomial({0.0, -0.5, 1.0}), lo, hi);
}

// identical fluxes u^2/2 in identical-flux mode
inline ValidatedFluxPair burgers_pair(double lo = -3.0, double hi = 3.0) {
  return validate_flux_pair(ScalarFlux::polynomial({0.0, 0.0, 0.5}),
                            ScalarFlux::polynomial({0.0, 0.0, 0.5}), lo, hi, true);
}

inline Connection conn_eighth(const ValidatedFluxPair& pair) {
  return connection_from_level(pair, 0.125);
}

constexpr double kB = 0.6830127018922193;  // (1 + sqrt(3))/4

// k_{AB} as a profile for the quadratic pair with gamma = 1/8
inline Profile kab_profile(const Connection& c, double width = 1.0) {
  return Profile::from_pieces({{-width, 0.0, c.A, c.A}, {0.0, width, c.B, c.B}}, c.A, c.B);
}

// piecewise-constant profile from breakpoints and values (values.size() ==
// breaks.size() + 1 with constant tails)
inline Profile pc_profile(const std::vector<double>& breaks,
                          const std::vector<double>& values) {
  std::vector<ProfilePiece> ps;
  std::vector<double> xs;
  xs.push_back(breaks.front() - 1.0);
  xs.insert(xs.end(), breaks.begin(), breaks.end());
  xs.push_back(breaks.back() + 1.0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    ps.push_back(ProfilePiece{xs[i], xs[i + 1], values[i], values[i]});
  return Profile::from_pieces(std::move(ps), values.front(), values.back());
}

inline std::vector<double> random_pc_cells(std::mt19937_64& rng, int pieces, double lo,
                                           double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(pieces));
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace abflux::testing
