#include "abflux/attainability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abflux {

std::string to_string(AttainClass c) {
  switch (c) {
    case AttainClass::A1: return "A1";
    case AttainClass::A2: return "A2";
    case AttainClass::A3: return "A3";
    case AttainClass::none: return "none";
  }
  return "?";
}

namespace {

struct Ctx {
  const Profile& w;
  double T;
  const ValidatedFluxPair& p;
  const Connection& c;
  double speed_scale;
  double ext_lo, ext_hi;
};

Ctx make_ctx(const Profile& w, double T, const ValidatedFluxPair& p, const Connection& c) {
  StateInterval values{std::min({w.min_value(), c.A, c.B}),
                       std::max({w.max_value(), c.A, c.B})};
  const double s = std::max(p.max_speed(values), 1e-12);
  const double slack = T * s + 1.0;
  return Ctx{w, T, p, c, s, w.domain_lo() - slack, w.domain_hi() + slack};
}

// Sorted sample abscissae: breakpoints, the given extra points, a uniform
// refinement per piece and on both tails.
std::vector<double> build_xs(const Ctx& ctx, std::vector<double> extras, int per_piece) {
  std::vector<double> xs;
  auto bps = ctx.w.breakpoints();
  xs.insert(xs.end(), bps.begin(), bps.end());
  for (double e : extras)
    if (e > ctx.ext_lo && e < ctx.ext_hi) xs.push_back(e);
  xs.push_back(ctx.ext_lo);
  xs.push_back(ctx.ext_hi);
  const auto& pieces = ctx.w.pieces();
  const int per = std::max<std::size_t>(2, std::min<std::size_t>(
      static_cast<std::size_t>(per_piece), 1 + 20000 / std::max<std::size_t>(1, pieces.size())));
  for (const auto& q : pieces)
    for (int i = 1; i < per; ++i) xs.push_back(q.x0 + (q.x1 - q.x0) * i / per);
  for (int i = 1; i < 16; ++i) {
    xs.push_back(ctx.ext_lo + (bps.front() - ctx.ext_lo) * i / 16.0);
    xs.push_back(bps.back() + (ctx.ext_hi - bps.back()) * i / 16.0);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

enum class Region { outer_left, mid, outer_right, gap };

Region region_of(CharMapKind kind, double x, bool left_side, double L, double R) {
  switch (kind) {
    case CharMapKind::phi1:
    case CharMapKind::psi1: {
      if (x < 0.0 || (x == 0.0 && left_side)) return Region::outer_left;
      if (x < R || (x == R && left_side)) return Region::mid;
      return Region::outer_right;
    }
    case CharMapKind::phi2:
    case CharMapKind::psi2: {
      if (x < L || (x == L && left_side)) return Region::outer_left;
      if (x < 0.0 || (x == 0.0 && left_side)) return Region::mid;
      return Region::outer_right;
    }
    case CharMapKind::phi3: {
      if (x < L || (x == L && left_side)) return Region::outer_left;
      if (x > R || (x == R && !left_side)) return Region::outer_right;
      return Region::gap;
    }
  }
  return Region::gap;
}

// One-sided map value; sets ok=false where a composition leaves its domain.
double map_value(const Ctx& ctx, CharMapKind kind, double x, double v, bool left_side,
                 double L, double R, bool& ok) {
  ok = true;
  const auto& p = ctx.p;
  const double T = ctx.T;
  const Region reg = region_of(kind, x, left_side, L, R);
  try {
    switch (kind) {
      case CharMapKind::phi1:
        if (reg == Region::outer_left) return x - p.df(Side::left, v) * T;
        if (reg == Region::mid) {
          const double s = p.df(Side::right, v);
          if (s <= 0.0) {
            ok = false;
            return 0.0;
          }
          const double vl = branch_inverse(p, Side::left, Branch::plus, p.f(Side::right, v));
          return -p.df(Side::left, vl) * (T - x / s);
        }
        return x - p.df(Side::right, v) * T;
      case CharMapKind::psi1: {
        if (reg != Region::mid) {
          ok = false;
          return 0.0;
        }
        const double s = p.df(Side::right, v);
        if (s <= 0.0) {
          ok = false;
          return 0.0;
        }
        return T - x / s;
      }
      case CharMapKind::phi2:
        if (reg == Region::outer_left) return x - p.df(Side::left, v) * T;
        if (reg == Region::mid) {
          const double s = p.df(Side::left, v);
          if (s >= 0.0) {
            ok = false;
            return 0.0;
          }
          const double vr = branch_inverse(p, Side::right, Branch::minus, p.f(Side::left, v));
          return -p.df(Side::right, vr) * (T - x / s);
        }
        return x - p.df(Side::right, v) * T;
      case CharMapKind::psi2: {
        if (reg != Region::mid) {
          ok = false;
          return 0.0;
        }
        const double s = p.df(Side::left, v);
        if (s >= 0.0) {
          ok = false;
          return 0.0;
        }
        return T - x / s;
      }
      case CharMapKind::phi3:
        if (reg == Region::outer_left) return x - p.df(Side::left, v) * T;
        if (reg == Region::outer_right) return x - p.df(Side::right, v) * T;
        ok = false;
        return 0.0;
    }
  } catch (const BelowMinimum&) {
    ok = false;
    return 0.0;
  }
  ok = false;
  return 0.0;
}

CharacteristicMap sample_map(const Ctx& ctx, CharMapKind kind, double L, double R,
                             int per_piece) {
  CharacteristicMap m;
  m.kind = kind;
  m.horizon = ctx.T;
  for (double x : build_xs(ctx, {0.0, L, R}, per_piece)) {
    CharSample s;
    s.x = x;
    s.left = map_value(ctx, kind, x, ctx.w.left_limit(x), true, L, R, s.left_ok);
    s.right = map_value(ctx, kind, x, ctx.w.right_limit(x), false, L, R, s.right_ok);
    m.samples.push_back(s);
  }
  return m;
}

CharMapKind phi_kind(AttainClass cls) {
  switch (cls) {
    case AttainClass::A1: return CharMapKind::phi1;
    case AttainClass::A2: return CharMapKind::phi2;
    default: return CharMapKind::phi3;
  }
}

// --- witness solves -------------------------------------------------------

// sup{x > 0 : f_r'(w(x+)) >= x/T}, located by scan plus bisection.
std::optional<double> solve_R_A1(const Ctx& ctx, double tol_g) {
  auto g = [&](double x) { return ctx.p.df(Side::right, ctx.w.right_limit(x)) - x / ctx.T; };
  const auto xs = build_xs(ctx, {0.0}, 64);
  double last_pos = std::numeric_limits<double>::quiet_NaN();
  double next_after = std::numeric_limits<double>::quiet_NaN();
  for (double x : xs) {
    if (x <= 0.0) continue;
    if (g(x) >= -tol_g) {
      last_pos = x;
      next_after = std::numeric_limits<double>::quiet_NaN();
    } else if (std::isnan(next_after)) {
      next_after = x;
    }
  }
  if (std::isnan(last_pos)) return std::nullopt;
  if (std::isnan(next_after)) return last_pos;  // holds to the sampled horizon
  // refine inside [last_pos, next_after] if g is continuous there
  const double gl = g(last_pos), gr = g(next_after);
  if (gl > 0.0 && gr < 0.0) {
    const auto jumps = ctx.w.jump_points(1e-13);
    for (double j : jumps)
      if (j > last_pos && j <= next_after) return j;  // R sits at a profile jump
    return detail::bisect(g, last_pos, next_after, 1e-13);
  }
  return last_pos;
}

// inf{x < 0 : f_l'(w(y)) <= y/T for all y in (x, 0)}.
std::optional<double> solve_L_A2(const Ctx& ctx, double tol_g) {
  auto g = [&](double x) { return ctx.p.df(Side::left, ctx.w.left_limit(x)) - x / ctx.T; };
  const auto xs = build_xs(ctx, {0.0}, 64);
  double last_neg = std::numeric_limits<double>::quiet_NaN();   // smallest x of the run
  double next_below = std::numeric_limits<double>::quiet_NaN();  // first x below with g > tol
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
    const double x = *it;
    if (x >= 0.0) continue;
    if (g(x) <= tol_g) {
      last_neg = x;
      next_below = std::numeric_limits<double>::quiet_NaN();
    } else if (std::isnan(next_below)) {
      next_below = x;
      break;
    }
  }
  if (std::isnan(last_neg)) return std::nullopt;
  if (std::isnan(next_below)) return last_neg;
  const double gl = g(next_below), gr = g(last_neg);
  if (gl > 0.0 && gr < 0.0) {
    const auto jumps = ctx.w.jump_points(1e-13);
    for (double j : jumps)
      if (j >= next_below && j < last_neg) return j;
    return detail::bisect(g, next_below, last_neg, 1e-13);
  }
  return last_neg;
}

// Maximal interval (Lstar, 0) on which |w - A| <= tol.
double plateau_extent_left(const Ctx& ctx, double A, double tol) {
  double lstar = 0.0;
  const auto& pieces = ctx.w.pieces();
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    if (it->x0 >= 0.0) continue;
    const double d0 = std::abs(it->u0 - A), d1 = std::abs(it->u1 - A);
    if (std::abs(ctx.w.right_limit(it->x1 >= 0.0 ? 0.0 : it->x1) - A) > tol && it->x1 < 0.0)
      break;
    if (d0 <= tol && d1 <= tol) {
      lstar = it->x0;
      continue;
    }
    if (d1 <= tol && d0 > tol) {
      // deviation grows towards x0: crossing of |w - A| = tol inside the piece
      const double t = (d0 - tol) / (d0 - d1);  // fraction from x0 towards x1
      lstar = it->x0 + t * (it->x1 - it->x0);
    }
    break;
  }
  if (lstar == pieces.front().x0 && std::abs(ctx.w.left_tail() - A) <= tol)
    lstar = -std::numeric_limits<double>::infinity();
  return lstar;
}

double plateau_extent_right(const Ctx& ctx, double B, double tol) {
  double rstar = 0.0;
  const auto& pieces = ctx.w.pieces();
  for (const auto& q : pieces) {
    if (q.x1 <= 0.0) continue;
    const double d0 = std::abs(q.u0 - B), d1 = std::abs(q.u1 - B);
    if (d0 <= tol && d1 <= tol) {
      rstar = q.x1;
      continue;
    }
    if (d0 <= tol && d1 > tol) {
      const double t = (tol - d0) / (d1 - d0);
      rstar = q.x0 + t * (q.x1 - q.x0);
    }
    break;
  }
  if (rstar == pieces.back().x1 && std::abs(ctx.w.right_tail() - B) <= tol)
    rstar = std::numeric_limits<double>::infinity();
  return rstar;
}

// --- condition verification -----------------------------------------------

struct Check {
  std::vector<Violation> vio;
  std::vector<std::string> boundary;
  void fail(const std::string& cond, double x, double margin) {
    vio.push_back(Violation{cond, x, margin});
  }
};

// Iterates one-sided samples of w over the open region (lo, hi).
template <class F>
void for_region(const Ctx& ctx, const std::vector<double>& xs, double lo, double hi, F&& f) {
  for (double x : xs) {
    if (x > lo && x <= hi) f(x, ctx.w.left_limit(x));
    if (x >= lo && x < hi) f(x, ctx.w.right_limit(x));
  }
}

void check_phi_monotone(const CharacteristicMap& m, const std::string& name, double tol,
                        Check& chk) {
  bool have_prev = false;
  double prev = 0.0, prev_x = 0.0;
  for (const auto& s : m.samples) {
    for (int side = 0; side < 2; ++side) {
      const bool ok = side == 0 ? s.left_ok : s.right_ok;
      const double val = side == 0 ? s.left : s.right;
      if (!ok) continue;
      if (have_prev && val < prev - tol)
        chk.fail(name + ".monotone", s.x, prev - val);
      if (!have_prev || val > prev) {
        prev = val;
        prev_x = s.x;
      }
      have_prev = true;
      (void)prev_x;
    }
  }
}

void check_phi_domain(const CharacteristicMap& m, const std::string& name, double lo,
                      double hi, Check& chk) {
  for (const auto& s : m.samples) {
    if (s.x <= lo || s.x >= hi) continue;
    if (!s.left_ok || !s.right_ok) chk.fail(name + ".domain", s.x, 0.0);
  }
}

// Strict monotonicity of psi on (lo, hi): required drop at jumps and net
// progress per piece (sign = -1 for decreasing psi1, +1 for increasing psi2).
void check_psi_strict(const Ctx& ctx, CharMapKind kind, double lo, double hi, double sign,
                      double strict, double jump_tol, const std::string& name, Check& chk) {
  const double L = kind == CharMapKind::psi2 ? lo : 0.0;
  const double R = kind == CharMapKind::psi1 ? hi : 0.0;
  auto psi_at = [&](double x, bool left_side, bool& ok) {
    const double v = left_side ? ctx.w.left_limit(x) : ctx.w.right_limit(x);
    return map_value(ctx, kind, x, v, left_side, L, R, ok);
  };
  // required drop across every jump of w inside (lo, hi)
  for (double x : ctx.w.jump_points(jump_tol)) {
    if (x <= lo || x >= hi) continue;
    bool okl = false, okr = false;
    const double vl = psi_at(x, true, okl);
    const double vr = psi_at(x, false, okr);
    if (!okl || !okr) {
      chk.fail(name + ".domain", x, 0.0);
      continue;
    }
    const double drop = sign * (vr - vl);
    if (drop < strict) chk.fail(name + ".strict", x, strict - drop);
  }
  // net progress per piece; an exactly-constant stretch (rarefaction envelope)
  // of positive length is rejected and surfaces here
  for (const auto& q : ctx.w.pieces()) {
    const double a = std::max(q.x0, lo), b = std::min(q.x1, hi);
    if (b - a <= 0.0) continue;
    bool oka = false, okb = false;
    const double va = psi_at(a, false, oka);
    const double vb = psi_at(b, true, okb);
    if (!oka || !okb) {
      chk.fail(name + ".domain", 0.5 * (a + b), 0.0);
      continue;
    }
    const double need = strict * (b - a);
    const double got = sign * (vb - va);
    if (got < need) chk.fail(name + ".envelope", 0.5 * (a + b), need - got);
  }
}

Check verify_candidate(const Ctx& ctx, const WitnessCandidate& cand,
                       const ToleranceSet& tol, int per_piece) {
  Check chk;
  const double T = ctx.T;
  const double tol_g = tol.ineq * (1.0 + ctx.speed_scale);
  const double tol_phi = tol.mono * (1.0 + T * ctx.speed_scale);
  const auto [wl, wr] = ctx.w.limits(0.0);
  const auto xs = build_xs(ctx, {0.0, cand.L.value_or(0.0), cand.R.value_or(0.0)}, per_piece);

  auto check_jump_down = [&](double x, const std::string& cond) {
    const double d = ctx.w.left_limit(x) - ctx.w.right_limit(x);
    if (d < -tol.jump) chk.fail(cond, x, -d);
  };

  if (cand.cls == AttainClass::A1) {
    const double R = cand.R.value_or(0.0);
    if (!(R > 0.0)) {
      chk.fail("A1.R_positive", 0.0, -R);
      return chk;
    }
    const double base = ctx.p.df(Side::left, wl);
    for_region(ctx, xs, ctx.ext_lo, 0.0, [&](double x, double v) {
      const double m = (x / T + base) - ctx.p.df(Side::left, v);
      if (m > tol_g) chk.fail("c11.left", x, m);
    });
    for_region(ctx, xs, 0.0, R, [&](double x, double v) {
      const double m = x / T - ctx.p.df(Side::right, v);
      if (m > tol_g) chk.fail("c11.mid", x, m);
    });
    for_region(ctx, xs, R, ctx.ext_hi, [&](double x, double v) {
      const double m = ctx.p.df(Side::right, v) - x / T;
      if (m > tol_g) chk.fail("c11.right", x, m);
      else if (std::abs(m) <= tol.strict_margin)
        chk.boundary.push_back("c11.right@" + std::to_string(x));
    });
    check_jump_down(R, "c11.jump_at_R");
    auto phi = sample_map(ctx, CharMapKind::phi1, 0.0, R, per_piece);
    check_phi_domain(phi, "phi1", ctx.ext_lo, ctx.ext_hi, chk);
    check_phi_monotone(phi, "phi1", tol_phi, chk);
    check_psi_strict(ctx, CharMapKind::psi1, 0.0, R, -1.0, tol.strict_margin, tol.jump,
                     "psi1", chk);
  } else if (cand.cls == AttainClass::A2) {
    const double L = cand.L.value_or(0.0);
    if (!(L < 0.0)) {
      chk.fail("A2.L_negative", 0.0, L);
      return chk;
    }
    const double base = ctx.p.df(Side::right, wr);
    for_region(ctx, xs, ctx.ext_lo, L, [&](double x, double v) {
      const double m = x / T - ctx.p.df(Side::left, v);
      if (m > tol_g) chk.fail("c21.left", x, m);
      else if (std::abs(m) <= tol.strict_margin)
        chk.boundary.push_back("c21.left@" + std::to_string(x));
    });
    for_region(ctx, xs, L, 0.0, [&](double x, double v) {
      const double m = ctx.p.df(Side::left, v) - x / T;
      if (m > tol_g) chk.fail("c21.mid", x, m);
    });
    for_region(ctx, xs, 0.0, ctx.ext_hi, [&](double x, double v) {
      const double m = ctx.p.df(Side::right, v) - (x / T + base);
      if (m > tol_g) chk.fail("c21.right", x, m);
    });
    check_jump_down(L, "c21.jump_at_L");
    auto phi = sample_map(ctx, CharMapKind::phi2, L, 0.0, per_piece);
    check_phi_domain(phi, "phi2", ctx.ext_lo, ctx.ext_hi, chk);
    check_phi_monotone(phi, "phi2", tol_phi, chk);
    check_psi_strict(ctx, CharMapKind::psi2, L, 0.0, +1.0, tol.strict_margin, tol.jump,
                     "psi2", chk);
  } else if (cand.cls == AttainClass::A3) {
    const double L = cand.L.value_or(0.0);
    const double R = cand.R.value_or(0.0);
    const bool ab_case = cand.trace_tag == TraceClass::AB;
    if (ab_case) {
      const double lstar = plateau_extent_left(ctx, ctx.c.A, tol.plateau);
      const double rstar = plateau_extent_right(ctx, ctx.c.B, tol.plateau);
      if (lstar > L + tol.wedge) chk.fail("c71.wedge_left", L, lstar - L);
      if (rstar < R - tol.wedge) chk.fail("c71.wedge_right", R, R - rstar);
      for_region(ctx, xs, L, 0.0, [&](double x, double v) {
        const double d = std::abs(v - ctx.c.A);
        if (d > tol.plateau) chk.fail("c71.plateau_A", x, d);
      });
      for_region(ctx, xs, 0.0, R, [&](double x, double v) {
        const double d = std::abs(v - ctx.c.B);
        if (d > tol.plateau) chk.fail("c71.plateau_B", x, d);
      });
    }
    check_jump_down(L, "c71.jump_at_L");
    check_jump_down(R, "c71.jump_at_R");
    const double base_l = ctx.p.df(Side::left, wl);
    const double base_r = ctx.p.df(Side::right, wr);
    for_region(ctx, xs, ctx.ext_lo, L, [&](double x, double v) {
      const double rhs = (L < -tol.wedge) ? x / T : x / T + base_l;
      const double m = rhs - ctx.p.df(Side::left, v);
      if (m > tol_g) chk.fail("c71.left", x, m);
    });
    for_region(ctx, xs, R, ctx.ext_hi, [&](double x, double v) {
      const double rhs = (R > tol.wedge) ? x / T : x / T + base_r;
      const double m = ctx.p.df(Side::right, v) - rhs;
      if (m > tol_g) chk.fail("c71.right", x, m);
    });
    auto phi = sample_map(ctx, CharMapKind::phi3, L, R, per_piece);
    check_phi_monotone(phi, "phi3", tol_phi, chk);
    // sign condition across the interface gap
    bool okL = true, okR = true;
    const double phiL = map_value(ctx, CharMapKind::phi3, L, ctx.w.left_limit(L), true, L, R, okL);
    const double phiR =
        map_value(ctx, CharMapKind::phi3, R, ctx.w.right_limit(R), false, L, R, okR);
    if (okL && phiL > tol_phi) chk.fail("phi3.sign_left", L, phiL);
    if (okR && phiR < -tol_phi) chk.fail("phi3.sign_right", R, -phiR);
  }
  return chk;
}

}  // namespace

CharacteristicMap phi_map(const Profile& omega, double T, const ValidatedFluxPair& pair,
                          const Connection& conn, AttainClass cls, std::optional<double> L,
                          std::optional<double> R, int per_piece) {
  Ctx ctx = make_ctx(omega, T, pair, conn);
  return sample_map(ctx, phi_kind(cls), L.value_or(0.0), R.value_or(0.0), per_piece);
}

CharacteristicMap psi_map(const Profile& omega, double T, const ValidatedFluxPair& pair,
                          const Connection& conn, AttainClass cls, std::optional<double> L,
                          std::optional<double> R, int per_piece) {
  if (cls != AttainClass::A1 && cls != AttainClass::A2)
    throw DomainError("psi_map is defined for classes A1 and A2 only");
  Ctx ctx = make_ctx(omega, T, pair, conn);
  return sample_map(ctx, cls == AttainClass::A1 ? CharMapKind::psi1 : CharMapKind::psi2,
                    L.value_or(0.0), R.value_or(0.0), per_piece);
}

std::vector<WitnessCandidate> find_witnesses(const Profile& omega, double T,
                                             const ValidatedFluxPair& pair,
                                             const Connection& conn,
                                             const ToleranceSet& tol) {
  Ctx ctx = make_ctx(omega, T, pair, conn);
  const auto [wl, wr] = omega.limits(0.0);
  const double tol_g = tol.ineq * (1.0 + ctx.speed_scale);
  std::vector<WitnessCandidate> out;

  if (trace_set_contains(pair, conn, TraceClass::AB, wl, wr, tol.trace)) {
    WitnessCandidate c;
    c.cls = AttainClass::A3;
    c.trace_tag = TraceClass::AB;
    c.L = T * pair.df(Side::left, conn.A);
    c.R = T * pair.df(Side::right, conn.B);
    out.push_back(c);
  }
  if (trace_set_contains(pair, conn, TraceClass::T1, wl, wr, tol.trace)) {
    if (auto R = solve_R_A1(ctx, tol_g)) {
      WitnessCandidate c;
      c.cls = AttainClass::A1;
      c.trace_tag = TraceClass::T1;
      c.R = *R;
      out.push_back(c);
    }
  }
  if (trace_set_contains(pair, conn, TraceClass::T2, wl, wr, tol.trace)) {
    if (auto L = solve_L_A2(ctx, tol_g)) {
      WitnessCandidate c;
      c.cls = AttainClass::A2;
      c.trace_tag = TraceClass::T2;
      c.L = *L;
      out.push_back(c);
    }
  }
  for (TraceClass t3 : {TraceClass::T3minus, TraceClass::T3plus}) {
    if (trace_set_contains(pair, conn, t3, wl, wr, tol.trace)) {
      WitnessCandidate c;
      c.cls = AttainClass::A3;
      c.trace_tag = t3;
      c.L = 0.0;
      c.R = 0.0;
      out.push_back(c);
    }
  }
  return out;
}

AttainabilityReport check_membership(const Profile& omega, double T,
                                     const ValidatedFluxPair& pair,
                                     const Connection& conn, const ToleranceSet& tol) {
  Ctx ctx = make_ctx(omega, T, pair, conn);
  AttainabilityReport rep;
  rep.tol = tol;
  const auto cands = find_witnesses(omega, T, pair, conn, tol);
  if (cands.empty()) {
    const auto [wl, wr] = omega.limits(0.0);
    rep.violations.push_back(
        Violation{"traces.inadmissible", 0.0, std::abs(wl - conn.A) + std::abs(wr - conn.B)});
    return rep;
  }
  std::size_t best = 0;
  std::vector<Check> checks;
  for (const auto& c : cands) {
    checks.push_back(verify_candidate(ctx, c, tol, 64));
    if (checks.back().vio.size() < checks[best].vio.size()) best = checks.size() - 1;
  }
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (checks[i].vio.empty()) {
      rep.member = true;
      rep.cls = cands[i].cls;
      rep.trace_tag = cands[i].trace_tag;
      rep.L = cands[i].L;
      rep.R = cands[i].R;
      rep.boundary_log = checks[i].boundary;
      return rep;
    }
  }
  rep.member = false;
  rep.cls = AttainClass::none;
  rep.trace_tag = cands[best].trace_tag;
  rep.L = cands[best].L;
  rep.R = cands[best].R;
  rep.violations = checks[best].vio;
  rep.boundary_log = checks[best].boundary;
  return rep;
}

}  // namespace abflux
