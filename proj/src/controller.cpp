#include "abflux/controller.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace abflux {

double CharPath::position(double tau) const {
  if (n < 2) return x[0];
  tau = std::clamp(tau, t[0], t[n - 1]);
  for (int i = 0; i + 1 < n; ++i) {
    if (tau <= t[i + 1] || i + 2 == n) {
      const double dt = t[i + 1] - t[i];
      if (dt <= 0.0) continue;
      return x[i] + (x[i + 1] - x[i]) * (tau - t[i]) / dt;
    }
  }
  return x[n - 1];
}

double CharPath::value(double tau) const {
  if (n < 3) return v[0];
  return tau <= t[1] ? v[0] : v[1];
}

bool TriRegion::contains(double x, double t) const {
  const double edge = slope * (t - anchor_t);
  if (edge <= 0.0) return x >= edge && x <= 0.0;
  return x >= 0.0 && x <= edge;
}

namespace {

struct CCtx {
  const Profile& w;
  double T;
  const ValidatedFluxPair& p;
  const Connection& c;
  AttainClass cls;
  TraceClass tag;
  double L, R;
  double wl, wr;  // omega(0-), omega(0+)
  double ext;     // sampling extent beyond the breakpoints
};

CCtx make_cctx(const Profile& w, double T, const ValidatedFluxPair& p, const Connection& c,
               const AttainabilityReport& rep) {
  StateInterval values{std::min({w.min_value(), c.A, c.B}),
                       std::max({w.max_value(), c.A, c.B})};
  const double s = std::max(p.max_speed(values), 1e-12);
  const auto lim = w.limits(0.0);
  return CCtx{w,     T,     p,
              c,     rep.cls, rep.trace_tag,
              rep.L.value_or(0.0), rep.R.value_or(0.0),
              lim.first, lim.second, T * s + 1.0};
}

double refract_right(const CCtx& k, double v) {
  return branch_inverse(k.p, Side::right, Branch::minus, k.p.f(Side::left, v));
}
double refract_left(const CCtx& k, double v) {
  return branch_inverse(k.p, Side::left, Branch::plus, k.p.f(Side::right, v));
}

FanLine straight_line(const CCtx& k, double y, bool left_side, double v, Side flux_side) {
  FanLine ln;
  ln.y = y;
  ln.left_side = left_side;
  const double s = k.p.df(flux_side, v);
  ln.foot = y - s * k.T;
  ln.initial_value = v;
  ln.vertices = {{0.0, ln.foot}, {k.T, y}};
  return ln;
}

// Line through (y, T) on the given side whose backward continuation refracts
// at the interface; v is the omega value it carries above the crossing.
FanLine crossing_line(const CCtx& k, double y, bool left_side, double v, Side upper_side) {
  FanLine ln;
  ln.y = y;
  ln.left_side = left_side;
  const double s_up = k.p.df(upper_side, v);
  double tau = (s_up == 0.0) ? -1.0 : k.T - y / s_up;
  if (y == 0.0) tau = k.T;
  if (!(tau > 0.0) || tau > k.T) {
    // marginal data: the line does not actually reach the interface
    return straight_line(k, y, left_side, v, upper_side);
  }
  const double v_low = upper_side == Side::right ? refract_left(k, v) : refract_right(k, v);
  const Side low_side = upper_side == Side::right ? Side::left : Side::right;
  const double s_low = k.p.df(low_side, v_low);
  ln.crossing_time = tau;
  ln.foot = -s_low * tau;
  ln.initial_value = v_low;
  if (tau >= k.T - 1e-15 * (1.0 + k.T)) {
    ln.vertices = {{0.0, ln.foot}, {k.T, 0.0}};
  } else {
    ln.vertices = {{0.0, ln.foot}, {tau, 0.0}, {k.T, y}};
  }
  return ln;
}

FanLine make_line(const CCtx& k, double y, bool left_side, double v) {
  switch (k.cls) {
    case AttainClass::A1: {
      if (y < 0.0 || (y == 0.0 && left_side)) return straight_line(k, y, left_side, v, Side::left);
      if (y < k.R || (y == k.R && left_side)) {
        if (y == 0.0) {  // theta_{0,+}: straight with the refracted value
          FanLine ln = straight_line(k, 0.0, false, refract_left(k, v), Side::left);
          ln.initial_value = refract_left(k, v);
          return ln;
        }
        return crossing_line(k, y, left_side, v, Side::right);
      }
      return straight_line(k, y, left_side, v, Side::right);
    }
    case AttainClass::A2: {
      if (y < k.L || (y == k.L && left_side)) return straight_line(k, y, left_side, v, Side::left);
      if (y < 0.0 || (y == 0.0 && left_side)) {
        if (y == 0.0) {  // theta_{0,-}: straight with the refracted value
          FanLine ln = straight_line(k, 0.0, true, refract_right(k, v), Side::right);
          ln.initial_value = refract_right(k, v);
          ln.left_side = true;
          return ln;
        }
        return crossing_line(k, y, left_side, v, Side::left);
      }
      return straight_line(k, y, left_side, v, Side::right);
    }
    default: {  // A3 variants: straight lines on each side
      if (y < 0.0 || (y == 0.0 && left_side)) return straight_line(k, y, left_side, v, Side::left);
      return straight_line(k, y, left_side, v, Side::right);
    }
  }
}

// Sample abscissae for fan construction: breakpoints, region boundaries,
// per-piece refinement, tail probes.
std::vector<double> fan_ys(const CCtx& k, int per_piece) {
  std::vector<double> ys;
  const auto bps = k.w.breakpoints();
  ys.insert(ys.end(), bps.begin(), bps.end());
  for (double e : {0.0, k.L, k.R}) ys.push_back(e);
  const auto& pieces = k.w.pieces();
  const std::size_t per = std::max<std::size_t>(
      2, std::min<std::size_t>(static_cast<std::size_t>(per_piece),
                               1 + 20000 / std::max<std::size_t>(1, pieces.size())));
  for (const auto& q : pieces)
    for (std::size_t i = 1; i < per; ++i)
      ys.push_back(q.x0 + (q.x1 - q.x0) * static_cast<double>(i) / static_cast<double>(per));
  const double lo = bps.front() - k.ext, hi = bps.back() + k.ext;
  for (int i = 0; i <= 8; ++i) {
    ys.push_back(lo + (bps.front() - lo) * i / 8.0);
    ys.push_back(bps.back() + (hi - bps.back()) * i / 8.0);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

bool in_fan_domain(const CCtx& k, double y, bool left_side) {
  if (k.cls != AttainClass::A3 || k.tag != TraceClass::AB) return true;
  // A3 with (A, B) traces: no evaluation lines inside the wedge gap (L, R)
  if (y > k.L && y < k.R) return false;
  if (y == k.L && !left_side && k.R > k.L) return false;
  if (y == k.R && left_side && k.R > k.L) return false;
  return true;
}

// --- crossing compression slopes -------------------------------------------

// Composite slope on the far side of the interface for a refracted
// compression line: A2 kind maps a right-side slope alpha < 0 to the left
// slope; A1 kind maps a left-side slope alpha > 0 to the right slope.
double far_slope(const CCtx& k, double alpha, bool a2_kind) {
  if (a2_kind) {
    const double vr = speed_inverse(k.p, Side::right, alpha);
    const double vl = branch_inverse(k.p, Side::left, Branch::minus, k.p.f(Side::right, vr));
    return k.p.df(Side::left, vl);
  }
  const double vl = speed_inverse(k.p, Side::left, alpha);
  const double vr = branch_inverse(k.p, Side::right, Branch::plus, k.p.f(Side::left, vl));
  return k.p.df(Side::right, vr);
}

double crossing_h(const CCtx& k, double x, double y_n, double alpha, bool a2_kind) {
  const double lam = far_slope(k, alpha, a2_kind);
  return k.T - y_n / lam + x / alpha;
}

double solve_alpha(const CCtx& k, double x, double y_n, double a_lo, double a_hi,
                   bool a2_kind, double* residual) {
  if (a_lo > a_hi) std::swap(a_lo, a_hi);
  auto h = [&](double a) { return crossing_h(k, x, y_n, a, a2_kind); };
  double root;
  if (a_hi - a_lo < 1e-14 * (1.0 + std::abs(a_lo))) {
    root = 0.5 * (a_lo + a_hi);
  } else {
    const double hl = h(a_lo), hh = h(a_hi);
    if ((hl > 0.0) == (hh > 0.0)) {
      // marginal bracket: keep the endpoint with the smaller residual
      root = std::abs(hl) < std::abs(hh) ? a_lo : a_hi;
    } else {
      root = detail::bisect(h, a_lo, a_hi, 1e-15);
    }
  }
  if (residual) *residual = std::abs(h(root));
  return root;
}

// --- assembly ---------------------------------------------------------------

struct Assembly {
  std::vector<FanLine> lines;
  std::vector<CompressionInterval> compressions;
  std::vector<PlateauInterval> plateaus;
  std::vector<double> rarefaction_centers;
  std::vector<std::pair<double, double>> wave_intervals;
  std::vector<CharFamily> families;
  std::vector<TriRegion> regions;
  // u0 samples (x, order-key, value)
  std::vector<std::array<double, 3>> samples;
  double max_alpha_residual = 0.0;

  void add_sample(double x, double key, double v) { samples.push_back({x, key, v}); }
};

// Transport family over a continuous run [ya, yb] of evaluation points.
void add_transport_family(const CCtx& k, Assembly& out, double ya, double yb) {
  if (!(yb > ya)) return;
  const CCtx* kk = &k;
  const Profile* w = &k.w;
  CharFamily fam;
  fam.p0 = ya;
  fam.p1 = yb;
  fam.make = [kk, w, ya, yb](double p) {
    double v;
    if (p <= ya)
      v = w->right_limit(ya);
    else if (p >= yb)
      v = w->left_limit(yb);
    else
      v = w->value(p);
    const FanLine ln = make_line(*kk, p, p >= yb, v);
    CharPath path;
    path.n = static_cast<int>(ln.vertices.size());
    for (int i = 0; i < path.n; ++i) {
      path.t[i] = ln.vertices[static_cast<std::size_t>(i)].first;
      path.x[i] = ln.vertices[static_cast<std::size_t>(i)].second;
    }
    if (path.n == 3) {
      path.v[0] = ln.initial_value;
      path.v[1] = v;
    } else {
      path.v[0] = ln.initial_value;
    }
    return path;
  };
  out.families.push_back(std::move(fam));
}

void add_pencil_family(const CCtx& k, Assembly& out, const CompressionInterval& ci,
                       double a_lo, double a_hi) {
  const CCtx* kk = &k;
  CharFamily fam;
  fam.p0 = ci.x_lo;
  fam.p1 = ci.x_hi;
  const bool a2_kind = ci.crossing && ci.side == Side::right;
  const CompressionInterval c = ci;
  fam.make = [kk, c, a_lo, a_hi, a2_kind](double p) {
    CharPath path;
    if (!c.crossing) {
      const double slope = (c.y - p) / kk->T;
      path.n = 2;
      path.t[0] = 0.0;
      path.x[0] = p;
      path.t[1] = kk->T;
      path.x[1] = c.y;
      path.v[0] = speed_inverse(kk->p, c.side, slope);
      return path;
    }
    const double alpha = solve_alpha(*kk, p, c.y, a_lo, a_hi, a2_kind, nullptr);
    const double tau = std::clamp(-p / alpha, 0.0, kk->T);
    path.n = 3;
    path.t[0] = 0.0;
    path.x[0] = p;
    path.t[1] = tau;
    path.x[1] = 0.0;
    path.t[2] = kk->T;
    path.x[2] = c.y;
    path.v[0] = speed_inverse(kk->p, c.side, alpha);
    path.v[1] = speed_inverse(kk->p, c.side == Side::right ? Side::left : Side::right,
                              far_slope(*kk, alpha, a2_kind));
    return path;
  };
  out.families.push_back(std::move(fam));
}

// Emit u0 samples across a compression interval and register its family.
void add_compression(const CCtx& k, Assembly& out, CompressionInterval ci, double a_lo = 0.0,
                     double a_hi = 0.0) {
  if (!(ci.x_hi - ci.x_lo > 1e-13 * (1.0 + std::abs(ci.x_lo)))) return;
  out.compressions.push_back(ci);
  const int n = 33;
  for (int i = 0; i <= n; ++i) {
    const double x = ci.x_lo + (ci.x_hi - ci.x_lo) * i / n;
    double v;
    if (!ci.crossing) {
      v = speed_inverse(k.p, ci.side, (ci.y - x) / k.T);
    } else {
      double res = 0.0;
      const bool a2_kind = ci.side == Side::right;
      const double alpha = solve_alpha(k, x, ci.y, a_lo, a_hi, a2_kind, &res);
      out.max_alpha_residual = std::max(out.max_alpha_residual, res);
      v = speed_inverse(k.p, ci.side, alpha);
    }
    out.add_sample(x, ci.y, v);
  }
  add_pencil_family(k, out, ci, a_lo, a_hi);
}

void add_plateau(const CCtx& k, Assembly& out, double x_lo, double x_hi, double value,
                 const std::string& label, double anchor_t, double slope) {
  if (!(x_hi - x_lo > 1e-13)) return;
  out.plateaus.push_back(PlateauInterval{x_lo, x_hi, value, label});
  out.add_sample(x_lo, 0.0, value);
  out.add_sample(x_hi, 0.0, value);
  out.regions.push_back(TriRegion{anchor_t, slope, value});
  (void)k;
}

// Walk a region [ya, yb] of the time-T line: emit fan lines, u0 samples,
// transport families per continuous run, and same-side / crossing
// compressions at interior downward jumps.
void walk_region(const CCtx& k, Assembly& out, const std::vector<double>& ys, double ya,
                 double yb) {
  double run_start = ya;
  double prev_y = ya;
  bool have_any = false;
  auto close_run = [&](double yend) {
    if (yend > run_start) {
      add_transport_family(k, out, run_start, yend);
      out.wave_intervals.emplace_back(make_line(k, run_start, false, k.w.right_limit(run_start)).foot,
                                      make_line(k, yend, true, k.w.left_limit(yend)).foot);
    }
  };
  const auto jumps = k.w.jump_points(1e-13);
  for (double y : ys) {
    if (y < ya || y > yb) continue;
    const bool is_jump =
        std::any_of(jumps.begin(), jumps.end(), [&](double j) { return j == y; }) && y > ya &&
        y < yb;
    const double vl = k.w.left_limit(y), vr = k.w.right_limit(y);
    FanLine lnl = make_line(k, y, true, vl);
    FanLine lnr = make_line(k, y, false, vr);
    if (y > ya) {
      out.lines.push_back(lnl);
      out.add_sample(lnl.foot, y, lnl.initial_value);
    }
    if (is_jump) {
      close_run(y);
      run_start = y;
      // compression gap between the one-sided lines
      if (lnr.foot - lnl.foot > 1e-13 * (1.0 + std::abs(lnl.foot))) {
        if (lnl.crossing_time || lnr.crossing_time || (lnl.foot < 0.0 && lnr.foot > 0.0)) {
          // straddling or refracted gap: split at the interface
          const bool a2_kind = k.cls == AttainClass::A2;
          const Side cross_side = a2_kind ? Side::right : Side::left;
          const double a_edge_lo = k.p.df(cross_side, lnr.initial_value);
          const double a_edge_hi = k.p.df(cross_side, lnl.initial_value);
          if (a2_kind) {
            // left part: straight to (y, T); right part: refracted
            if (lnl.foot < 0.0)
              add_compression(k, out,
                              CompressionInterval{lnl.foot, std::min(0.0, lnr.foot), y, false,
                                                  Side::left});
            if (lnr.foot > 0.0) {
              const double lo = std::max(0.0, lnl.foot);
              double a_hi_eff = a_edge_hi;
              if (lnl.foot < 0.0) {
                // bracket end where the refracted line leaves x = 0 at t = 0
                const double vr0 = refract_right(k, speed_inverse(k.p, Side::left, y / k.T));
                a_hi_eff = k.p.df(Side::right, vr0);
              }
              add_compression(k, out,
                              CompressionInterval{lo, lnr.foot, y, true, Side::right},
                              a_edge_lo, a_hi_eff);
            }
          } else {
            if (lnl.foot < 0.0) {
              const double hi = std::min(0.0, lnr.foot);
              double a_lo_eff = a_edge_lo;
              if (lnr.foot > 0.0) {
                const double vl0 = refract_left(k, speed_inverse(k.p, Side::right, y / k.T));
                a_lo_eff = k.p.df(Side::left, vl0);
              }
              add_compression(k, out, CompressionInterval{lnl.foot, hi, y, true, Side::left},
                              a_lo_eff, a_edge_hi);
            }
            if (lnr.foot > 0.0)
              add_compression(k, out,
                              CompressionInterval{std::max(0.0, lnl.foot), lnr.foot, y, false,
                                                  Side::right});
          }
        } else {
          add_compression(k, out,
                          CompressionInterval{lnl.foot, lnr.foot, y, false,
                                              lnl.foot >= 0.0 ? Side::right : Side::left});
        }
      } else if (lnl.foot - lnr.foot > 1e-10 * (1.0 + std::abs(lnl.foot))) {
        out.rarefaction_centers.push_back(lnl.foot);  // inverted feet: coalescing
      }
    }
    if (y < yb || y == yb) {
      out.lines.push_back(lnr);
      out.add_sample(lnr.foot, y + 1e-300, lnr.initial_value);
    }
    prev_y = y;
    have_any = true;
  }
  (void)prev_y;
  (void)have_any;
  close_run(yb);
}

}  // namespace

double compression_slope(double x, double y_n, double alpha_plus, double alpha_minus,
                         const ValidatedFluxPair& pair, const Connection& conn, double T) {
  Profile dummy = Profile::constant(0.0);
  AttainabilityReport rep;
  rep.cls = AttainClass::A2;
  CCtx k = make_cctx(dummy, T, pair, conn, rep);
  double res = 0.0;
  const double a = solve_alpha(k, x, y_n, alpha_plus, alpha_minus, true, &res);
  if (res > 1e-10 * T)
    throw BracketFailure("compression_slope: residual above tolerance, inconsistent data");
  return a;
}

BackwardFan build_fan(const Profile& omega, double T, const ValidatedFluxPair& pair,
                      const Connection& conn, const AttainabilityReport& report,
                      int per_piece) {
  if (!report.member) throw MembershipRequired("build_fan requires a member profile");
  CCtx k = make_cctx(omega, T, pair, conn, report);
  BackwardFan fan;
  fan.cls = report.cls;
  fan.trace_tag = report.trace_tag;
  fan.T = T;
  fan.L = k.L;
  fan.R = k.R;
  for (double y : fan_ys(k, per_piece)) {
    if (in_fan_domain(k, y, true))
      fan.lines.push_back(make_line(k, y, true, omega.left_limit(y)));
    if (in_fan_domain(k, y, false))
      fan.lines.push_back(make_line(k, y, false, omega.right_limit(y)));
  }
  fan.min_foot_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < fan.lines.size(); ++i)
    fan.min_foot_gap =
        std::min(fan.min_foot_gap, fan.lines[i].foot - fan.lines[i - 1].foot);
  return fan;
}

namespace {

Assembly assemble(const CCtx& k, const std::vector<double>& ys) {
  Assembly out;
  const double y_lo = ys.front(), y_hi = ys.back();
  switch (k.cls) {
    case AttainClass::A1: {
      walk_region(k, out, ys, y_lo, 0.0);
      // gap between theta_{0,-} and theta_{0,+} (left-side compression at y = 0)
      const FanLine l0 = make_line(k, 0.0, true, k.wl);
      const FanLine r0 = make_line(k, 0.0, false, k.wr);
      if (r0.foot - l0.foot > 1e-13)
        add_compression(k, out, CompressionInterval{l0.foot, r0.foot, 0.0, false, Side::left});
      walk_region(k, out, ys, 0.0, k.R);
      // gap at R may straddle the interface
      const FanLine lr = make_line(k, k.R, true, k.w.left_limit(k.R));
      const FanLine rr = make_line(k, k.R, false, k.w.right_limit(k.R));
      if (rr.foot - lr.foot > 1e-13) {
        if (lr.foot < 0.0) {
          const double vl0 = refract_left(k, speed_inverse(k.p, Side::right, k.R / k.T));
          add_compression(k, out,
                          CompressionInterval{lr.foot, std::min(0.0, rr.foot), k.R, true,
                                              Side::left},
                          k.p.df(Side::left, vl0),
                          k.p.df(Side::left, refract_left(k, k.w.left_limit(k.R))));
        }
        if (rr.foot > 0.0)
          add_compression(k, out,
                          CompressionInterval{std::max(0.0, lr.foot), rr.foot, k.R, false,
                                              Side::right});
      }
      walk_region(k, out, ys, k.R, y_hi);
      break;
    }
    case AttainClass::A2: {
      walk_region(k, out, ys, y_lo, k.L);
      const FanLine ll = make_line(k, k.L, true, k.w.left_limit(k.L));
      const FanLine rl = make_line(k, k.L, false, k.w.right_limit(k.L));
      if (rl.foot - ll.foot > 1e-13) {
        if (ll.foot < 0.0)
          add_compression(k, out,
                          CompressionInterval{ll.foot, std::min(0.0, rl.foot), k.L, false,
                                              Side::left});
        if (rl.foot > 0.0) {
          const double vr0 = refract_right(k, speed_inverse(k.p, Side::left, k.L / k.T));
          add_compression(k, out,
                          CompressionInterval{std::max(0.0, ll.foot), rl.foot, k.L, true,
                                              Side::right},
                          k.p.df(Side::right, refract_right(k, k.w.right_limit(k.L))),
                          k.p.df(Side::right, vr0));
        }
      }
      walk_region(k, out, ys, k.L, 0.0);
      const FanLine l0 = make_line(k, 0.0, true, k.wl);
      const FanLine r0 = make_line(k, 0.0, false, k.wr);
      if (r0.foot - l0.foot > 1e-13)
        add_compression(k, out, CompressionInterval{l0.foot, r0.foot, 0.0, false, Side::right});
      walk_region(k, out, ys, 0.0, y_hi);
      break;
    }
    case AttainClass::A3:
    default: {
      if (k.tag == TraceClass::AB) {
        walk_region(k, out, ys, y_lo, k.L);
        const double fa = k.p.df(Side::left, k.c.A);
        const double fb = k.p.df(Side::right, k.c.B);
        const FanLine ll = make_line(k, k.L, true, k.w.left_limit(k.L));
        add_compression(k, out,
                        CompressionInterval{ll.foot, k.L - fa * k.T, k.L, false, Side::left});
        add_plateau(k, out, k.L - fa * k.T, 0.0, k.c.A, "wedge_A", 0.0, fa);
        add_plateau(k, out, 0.0, k.R - fb * k.T, k.c.B, "wedge_B", 0.0, fb);
        const FanLine rr = make_line(k, k.R, false, k.w.right_limit(k.R));
        add_compression(k, out,
                        CompressionInterval{k.R - fb * k.T, rr.foot, k.R, false, Side::right});
        walk_region(k, out, ys, k.R, y_hi);
        // wedge regions even when degenerate plateaus were skipped
        out.regions.push_back(TriRegion{0.0, fa, k.c.A});
        out.regions.push_back(TriRegion{0.0, fb, k.c.B});
      } else if (k.tag == TraceClass::T3minus) {
        walk_region(k, out, ys, y_lo, 0.0);
        const double sl = k.p.df(Side::left, k.wl);
        const double vref = refract_right(k, k.wl);
        const double sr = k.p.df(Side::right, vref);
        const double x0m = -sl * k.T;       // foot of theta_{0,-}
        const double x0s = -sr * k.T;       // foot of theta_{0,*}
        const double x0p = -k.p.df(Side::right, k.wr) * k.T;  // foot of theta_{0,+}
        add_plateau(k, out, x0m, 0.0, k.wl, "trace_left", k.T, sl);
        add_plateau(k, out, 0.0, x0s, vref, "trace_right_refracted", k.T, sr);
        add_compression(k, out, CompressionInterval{x0s, x0p, 0.0, false, Side::right});
        walk_region(k, out, ys, 0.0, y_hi);
      } else {  // T3plus mirror
        walk_region(k, out, ys, y_lo, 0.0);
        const double sr = k.p.df(Side::right, k.wr);
        const double vref = refract_left(k, k.wr);
        const double sl = k.p.df(Side::left, vref);
        const double x0p = -sr * k.T;  // foot of theta_{0,+} (> 0)
        const double x0s = -sl * k.T;  // foot of theta_{0,*} (< 0)
        const double x0m = -k.p.df(Side::left, k.wl) * k.T;
        add_compression(k, out, CompressionInterval{x0m, x0s, 0.0, false, Side::left});
        add_plateau(k, out, x0s, 0.0, vref, "trace_left_refracted", k.T, sl);
        add_plateau(k, out, 0.0, x0p, k.wr, "trace_right", k.T, sr);
        walk_region(k, out, ys, 0.0, y_hi);
      }
      break;
    }
  }
  return out;
}

}  // namespace

InitialPartition partition_initial_line(const BackwardFan& fan, const Profile& omega,
                                        double T, const ValidatedFluxPair& pair,
                                        const Connection& conn) {
  AttainabilityReport rep;
  rep.member = true;
  rep.cls = fan.cls;
  rep.trace_tag = fan.trace_tag;
  rep.L = fan.L;
  rep.R = fan.R;
  CCtx k = make_cctx(omega, T, pair, conn, rep);
  Assembly a = assemble(k, fan_ys(k, 64));
  InitialPartition part;
  part.rarefaction_centers = a.rarefaction_centers;
  part.compressions = a.compressions;
  part.plateaus = a.plateaus;
  part.wave_intervals = a.wave_intervals;
  // coalescing feet within transported runs are rarefaction centres too
  std::vector<double> feet;
  for (const auto& ln : fan.lines) feet.push_back(ln.foot);
  std::sort(feet.begin(), feet.end());
  for (std::size_t i = 1; i < feet.size(); ++i) {
    if (feet[i] - feet[i - 1] <= 1e-12 * (1.0 + std::abs(feet[i])) && i + 1 < feet.size() &&
        feet[i + 1] - feet[i] > 1e-9)
      part.rarefaction_centers.push_back(feet[i]);
  }
  std::sort(part.rarefaction_centers.begin(), part.rarefaction_centers.end());
  part.rarefaction_centers.erase(
      std::unique(part.rarefaction_centers.begin(), part.rarefaction_centers.end(),
                  [](double a_, double b_) { return std::abs(a_ - b_) < 1e-9; }),
      part.rarefaction_centers.end());
  return part;
}

SteeringPlan steer(const Profile& omega, double T, const ValidatedFluxPair& pair,
                   const Connection& conn, const std::optional<AttainabilityReport>& report,
                   const ToleranceSet& tol) {
  AttainabilityReport rep = report ? *report : check_membership(omega, T, pair, conn, tol);
  if (!rep.member)
    throw MembershipRequired("steer: target profile is not attainable at the given horizon");
  CCtx k = make_cctx(omega, T, pair, conn, rep);

  SteeringPlan plan;
  plan.cls = rep.cls;
  plan.trace_tag = rep.trace_tag;
  plan.T = T;
  plan.L = k.L;
  plan.R = k.R;

  Assembly a = assemble(k, fan_ys(k, 64));

  // initial datum from the collected (foot, value) stream
  std::sort(a.samples.begin(), a.samples.end(),
            [](const auto& s1, const auto& s2) {
              if (s1[0] != s2[0]) return s1[0] < s2[0];
              return s1[1] < s2[1];
            });
  std::vector<double> xs, vs;
  for (const auto& s : a.samples) {
    if (!xs.empty() && s[0] - xs.back() < -1e-12) continue;  // tolerance inversion
    if (!xs.empty() && std::abs(s[0] - xs.back()) <= 1e-15 &&
        std::abs(s[2] - vs.back()) <= 1e-13)
      continue;
    xs.push_back(std::max(s[0], xs.empty() ? s[0] : xs.back()));
    vs.push_back(s[2]);
  }
  plan.u0 = Profile::from_samples(xs, vs);
  plan.partition.rarefaction_centers = a.rarefaction_centers;
  plan.partition.compressions = a.compressions;
  plan.partition.plateaus = a.plateaus;
  plan.partition.wave_intervals = a.wave_intervals;
  plan.families = std::move(a.families);
  plan.regions = std::move(a.regions);
  plan.fan = build_fan(omega, T, pair, conn, rep);

  plan.diagnostics.max_alpha_residual = a.max_alpha_residual;
  plan.diagnostics.min_foot_gap = plan.fan.min_foot_gap;
  plan.diagnostics.u0_sup = plan.u0.sup_abs();
  double M = 0.0;
  for (const auto& ln : plan.fan.lines)
    M = std::max(M, std::max(std::abs(ln.initial_value),
                             std::abs(omega.left_limit(ln.y))));
  M = std::max(M, std::max(std::abs(conn.A), std::abs(conn.B)));
  plan.diagnostics.u0_bound = M;
  return plan;
}

double reconstruct_value(const SteeringPlan& plan, const Profile& omega, double x, double t) {
  const double T = plan.T;
  if (t >= T - 1e-14 * (1.0 + T)) return x < 0.0 ? omega.left_limit(x) : omega.right_limit(x);
  if (t <= 1e-14) return plan.u0.value(x);
  for (const auto& r : plan.regions)
    if (r.contains(x, t)) return r.value;
  const double pad = 1e-11 * (1.0 + std::abs(x));
  double best_val = 0.0, best_dist = std::numeric_limits<double>::infinity();
  for (const auto& fam : plan.families) {
    const double lo = fam.make(fam.p0).position(t);
    const double hi = fam.make(fam.p1).position(t);
    if (x < lo - pad || x > hi + pad) {
      const double d = x < lo ? lo - x : x - hi;
      if (d < best_dist) {
        best_dist = d;
        best_val = x < lo ? fam.make(fam.p0).value(t) : fam.make(fam.p1).value(t);
      }
      continue;
    }
    double p0 = fam.p0, p1 = fam.p1;
    for (int it = 0; it < 64; ++it) {
      const double pm = 0.5 * (p0 + p1);
      if (fam.make(pm).position(t) < x)
        p0 = pm;
      else
        p1 = pm;
    }
    const CharPath path = fam.make(0.5 * (p0 + p1));
    return path.value(t);
  }
  if (best_dist < std::numeric_limits<double>::infinity()) return best_val;
  return x < 0.0 ? plan.u0.left_tail() : plan.u0.right_tail();
}

Field reconstruct_field(const SteeringPlan& plan, const Profile& omega, double T,
                        const ValidatedFluxPair& pair, const Connection& conn,
                        const Grid& grid, int frames) {
  Field f;
  f.grid = grid;
  f.exact = true;
  f.bound = invariant_interval(pair, conn, std::min(plan.u0.min_value(), omega.min_value()),
                               std::max(plan.u0.max_value(), omega.max_value()));
  const int nf = std::max(2, frames);
  for (int j = 0; j < nf; ++j) {
    const double t = T * j / (nf - 1);
    std::vector<double> state(static_cast<std::size_t>(grid.n_cells));
    for (int i = 0; i < grid.n_cells; ++i)
      state[static_cast<std::size_t>(i)] = reconstruct_value(plan, omega, grid.center(i), t);
    f.times.push_back(t);
    TracePair tp;
    tp.u_l = reconstruct_value(plan, omega, -0.25 * grid.dx, t);
    tp.u_r = reconstruct_value(plan, omega, 0.25 * grid.dx, t);
    tp.flux = interface_flux_AB(pair, conn, tp.u_l, tp.u_r);
    f.trace_history.push_back(tp);
    f.states.push_back(std::move(state));
  }
  f.mass_initial = mass(f.states.front(), grid);
  return f;
}

}  // namespace abflux
