#include "abflux/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abflux {

Grid make_grid(double x_min, double x_max, int n_cells) {
  if (!(x_min < 0.0 && 0.0 < x_max))
    throw BadDomain("grid must contain the interface x = 0 in its interior");
  if (n_cells < 2) throw BadDomain("grid needs at least two cells");
  Grid g;
  g.n_cells = n_cells;
  g.dx = (x_max - x_min) / n_cells;
  const int k = static_cast<int>(std::lround(-x_min / g.dx));
  if (k < 1 || k > n_cells - 1)
    throw BadDomain("interface would fall on the domain boundary after alignment");
  g.shift = -(x_min + k * g.dx);
  g.x_min = -k * g.dx;
  g.x_max = g.x_min + n_cells * g.dx;
  g.interface_edge = k;
  return g;
}

Grid make_padded_grid(double x_min, double x_max, int n_cells_for_width, double T,
                      double s_max) {
  const double pad = T * s_max;
  const double dx = (x_max - x_min) / n_cells_for_width;
  const int extra = static_cast<int>(std::ceil(pad / dx));
  return make_grid(x_min - extra * dx, x_max + extra * dx, n_cells_for_width + 2 * extra);
}

double mass(const std::vector<double>& state, const Grid& grid) {
  double s = 0.0;
  for (double u : state) s += u;
  return s * grid.dx;
}

std::vector<double> cell_averages(const Profile& p, const Grid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.n_cells));
  for (int i = 0; i < grid.n_cells; ++i)
    out[static_cast<std::size_t>(i)] = p.average(grid.edge(i), grid.edge(i + 1));
  return out;
}

Profile profile_from_cells(const std::vector<double>& state, const Grid& grid) {
  std::vector<double> xs, us;
  const int k = grid.interface_edge;
  auto push = [&](double x, double u) {
    xs.push_back(x);
    us.push_back(u);
  };
  // left side: constant to the first center, PL between centers, constant to 0-
  push(grid.edge(0), state[0]);
  for (int i = 0; i < k; ++i) push(grid.center(i), state[static_cast<std::size_t>(i)]);
  push(0.0, state[static_cast<std::size_t>(k - 1)]);
  // right side
  push(0.0, state[static_cast<std::size_t>(k)]);
  for (int i = k; i < grid.n_cells; ++i)
    push(grid.center(i), state[static_cast<std::size_t>(i)]);
  push(grid.edge(grid.n_cells), state[static_cast<std::size_t>(grid.n_cells - 1)]);
  return Profile::from_samples(xs, us);
}

namespace {

std::vector<double> frame_times(double T, const EvolveOptions& o) {
  std::vector<double> ts;
  const int n = std::max(2, o.output_frames);
  if (o.geometric_schedule) {
    ts.push_back(0.0);
    double t = T / std::pow(2.0, n - 2);
    for (int i = 0; i + 2 < n; ++i) {
      ts.push_back(t);
      t *= 2.0;
    }
    ts.push_back(T);
  } else {
    for (int i = 0; i < n; ++i) ts.push_back(T * i / (n - 1));
  }
  return ts;
}

}  // namespace

Field evolve(const Profile& u0, double T, const ValidatedFluxPair& pair,
             const Connection& conn, const Grid& grid, const EvolveOptions& opts) {
  return evolve(cell_averages(u0, grid), T, pair, conn, grid, opts);
}

Field evolve(std::vector<double> u, double T, const ValidatedFluxPair& pair,
             const Connection& conn, const Grid& grid, const EvolveOptions& opts) {
  if (static_cast<int>(u.size()) != grid.n_cells)
    throw BadDomain("initial data size does not match the grid");
  if (!(T >= 0.0)) throw BadDomain("negative horizon");
  if (!(opts.cfl > 0.0 && opts.cfl <= 1.0)) throw CFLViolation("cfl must lie in (0, 1]");

  double lo = u[0], hi = u[0];
  for (double v : u) {
    if (!std::isfinite(v)) throw NonFinite("non-finite initial data");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Field out;
  out.grid = grid;
  out.bound = invariant_interval(pair, conn, lo, hi);
  const double s_max = std::max(pair.max_speed(out.bound), 1e-300);
  const double dt_stable = opts.cfl * grid.dx / s_max;
  double dt = dt_stable;
  if (opts.fixed_dt) {
    if (*opts.fixed_dt > grid.dx / s_max + 1e-15)
      throw CFLViolation("requested fixed dt exceeds the CFL bound");
    dt = *opts.fixed_dt;
  }

  out.mass_initial = mass(u, grid);
  out.min_interface_flux = std::numeric_limits<double>::infinity();

  const int n = grid.n_cells;
  const int ke = grid.interface_edge;
  std::vector<double> flux(static_cast<std::size_t>(n) + 1);
  const std::vector<double> frames = frame_times(T, opts);
  std::size_t next_frame = 0;

  auto store = [&](double t) {
    out.times.push_back(t);
    out.states.push_back(u);
    const int b = std::max(1, opts.trace_band);
    const double ul = u[static_cast<std::size_t>(std::max(0, ke - b))];
    const double ur = u[static_cast<std::size_t>(std::min(n - 1, ke - 1 + b))];
    TracePair tp;
    tp.u_l = ul;
    tp.u_r = ur;
    tp.flux = interface_flux_AB(pair, conn, ul, ur);
    out.trace_history.push_back(tp);
  };

  double t = 0.0;
  if (!frames.empty() && frames[0] == 0.0) {
    store(0.0);
    ++next_frame;
  }

  while (t < T - 1e-15 * (1.0 + T)) {
    double step = std::min(dt, T - t);
    if (next_frame < frames.size()) step = std::min(step, frames[next_frame] - t);
    if (step <= 0.0) step = std::min(dt, T - t);

    // edge fluxes: classical Godunov per side, AB flux at the interface
    flux[0] = pair.f(Side::left, u[0]);  // outflow ghost copy
    flux[static_cast<std::size_t>(n)] = pair.f(Side::right, u[static_cast<std::size_t>(n - 1)]);
    for (int i = 1; i < n; ++i) {
      const double a = u[static_cast<std::size_t>(i - 1)];
      const double b = u[static_cast<std::size_t>(i)];
      if (i == ke)
        flux[static_cast<std::size_t>(i)] = interface_flux_AB(pair, conn, a, b);
      else if (i < ke)
        flux[static_cast<std::size_t>(i)] = godunov_flux_classical(pair, Side::left, a, b);
      else
        flux[static_cast<std::size_t>(i)] = godunov_flux_classical(pair, Side::right, a, b);
    }
    out.min_interface_flux =
        std::min(out.min_interface_flux, flux[static_cast<std::size_t>(ke)]);

    const double lambda = step / grid.dx;
    for (int i = 0; i < n; ++i)
      u[static_cast<std::size_t>(i)] -=
          lambda * (flux[static_cast<std::size_t>(i + 1)] - flux[static_cast<std::size_t>(i)]);

    t += step;
    ++out.steps;
    if (out.steps % 64 == 0 || t >= T - 1e-15 * (1.0 + T)) {
      for (double v : u)
        if (!std::isfinite(v)) throw NonFinite("solver produced a non-finite state");
      out.max_mass_drift =
          std::max(out.max_mass_drift, std::abs(mass(u, grid) - out.mass_initial));
    }
    while (next_frame < frames.size() && t >= frames[next_frame] - 1e-13 * (1.0 + T)) {
      store(t);
      ++next_frame;
    }
  }
  if (out.times.empty() || out.times.back() < T - 1e-13 * (1.0 + T)) store(t);
  out.max_mass_drift =
      std::max(out.max_mass_drift, std::abs(mass(u, grid) - out.mass_initial));
  if (T == 0.0 && out.times.empty()) store(0.0);
  return out;
}

std::vector<std::pair<double, TracePair>> interface_trace_history(
    const Field& field, const ValidatedFluxPair& pair, const Connection& conn, int band) {
  if (band < 1) throw BadDomain("trace band must be >= 1");
  std::vector<std::pair<double, TracePair>> out;
  const int n = field.grid.n_cells;
  const int ke = field.grid.interface_edge;
  for (std::size_t k = 0; k < field.times.size(); ++k) {
    const auto& s = field.states[k];
    TracePair tp;
    tp.u_l = s[static_cast<std::size_t>(std::max(0, ke - band))];
    tp.u_r = s[static_cast<std::size_t>(std::min(n - 1, ke - 1 + band))];
    tp.flux = interface_flux_AB(pair, conn, tp.u_l, tp.u_r);
    out.emplace_back(field.times[k], tp);
  }
  return out;
}

double l1_error_vs_profile(const Field& field, std::size_t level, const Profile& target,
                           double lo, double hi) {
  const auto& s = field.states.at(level);
  const auto t = cell_averages(target, field.grid);
  double e = 0.0;
  for (int i = 0; i < field.grid.n_cells; ++i) {
    const double xc = field.grid.center(i);
    if (xc < lo || xc > hi) continue;
    e += std::abs(s[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(i)]) *
         field.grid.dx;
  }
  return e;
}

}  // namespace abflux
