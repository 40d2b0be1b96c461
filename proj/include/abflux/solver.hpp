#pragma once

#include <optional>
#include <vector>

#include "abflux/fluxes.hpp"
#include "abflux/profile.hpp"
#include "abflux/riemann.hpp"

namespace abflux {

/// Uniform grid with the flux-discontinuity point x = 0 on a cell edge.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_cells = 0;
  double dx = 0.0;
  int interface_edge = 0;  // edge index at x = 0 (cells left of it: 0..interface_edge-1)
  double shift = 0.0;      // applied to align x = 0 with an edge

  double edge(int i) const { return x_min + i * dx; }
  double center(int i) const { return x_min + (i + 0.5) * dx; }
};

Grid make_grid(double x_min, double x_max, int n_cells);

/// Expands [x_min, x_max] by T * s_max on both sides (finite speed of
/// propagation) keeping the interface on an edge.
Grid make_padded_grid(double x_min, double x_max, int n_cells_for_width, double T,
                      double s_max);

struct EvolveOptions {
  double cfl = 0.45;
  std::optional<double> fixed_dt;  // CFLViolation if above the stability bound
  int output_frames = 17;          // stored levels incl. t=0 and t=T
  bool geometric_schedule = false;
  int trace_band = 1;
};

/// Space-time trajectory: stored cell-average levels plus interface data.
struct Field {
  Grid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<TracePair> trace_history;  // band-sampled traces per stored level
  bool exact = false;                    // true for characteristic reconstructions
  StateInterval bound;                   // a-priori invariant interval of the run
  double mass_initial = 0.0;
  double max_mass_drift = 0.0;
  double min_interface_flux = 0.0;  // min over steps of the interface edge flux
  long steps = 0;

  const std::vector<double>& final_state() const { return states.back(); }
};

double mass(const std::vector<double>& state, const Grid& grid);

/// Exact cell averages of a piecewise-affine profile.
std::vector<double> cell_averages(const Profile& p, const Grid& grid);

/// Piecewise-linear profile through cell centers; x = 0 kept as a boundary
/// with one-sided values from the adjacent cells.
Profile profile_from_cells(const std::vector<double>& state, const Grid& grid);

/// First-order Godunov evolution of the AB semigroup on an interface-aligned
/// grid: classical Godunov fluxes within each side, the AB interface flux at
/// x = 0, outflow boundaries.
Field evolve(std::vector<double> u0, double T, const ValidatedFluxPair& pair,
             const Connection& conn, const Grid& grid, const EvolveOptions& opts = {});
Field evolve(const Profile& u0, double T, const ValidatedFluxPair& pair,
             const Connection& conn, const Grid& grid, const EvolveOptions& opts = {});

/// Band-sampled interface traces per stored time level.
std::vector<std::pair<double, TracePair>> interface_trace_history(
    const Field& field, const ValidatedFluxPair& pair, const Connection& conn, int band);

/// L1 distance between a stored level's cell averages and a profile's exact
/// cell averages over [lo, hi].
double l1_error_vs_profile(const Field& field, std::size_t level, const Profile& target,
                           double lo, double hi);

}  // namespace abflux
