#include "abflux/fluxes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abflux {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  if (d.empty()) d.push_back(0.0);
  return d;
}

double horner(const std::vector<double>& c, double u) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
  return r;
}

}  // namespace

ScalarFlux ScalarFlux::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  ScalarFlux f;
  f.kind_ = Kind::poly;
  f.coeff_ = std::move(coeffs);
  f.dcoeff_ = differentiate(f.coeff_);
  f.ddcoeff_ = differentiate(f.dcoeff_);
  return f;
}

ScalarFlux ScalarFlux::spline(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw DomainError("spline flux needs at least 3 sorted knots");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw DomainError("spline knots must be strictly increasing");
  ScalarFlux f;
  f.kind_ = Kind::spline;
  f.sx_ = std::move(x);
  f.sy_ = std::move(y);
  // natural cubic spline second derivatives (tridiagonal solve)
  const std::size_t n = f.sx_.size();
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = f.sx_[i] - f.sx_[i - 1];
    const double hr = f.sx_[i + 1] - f.sx_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    r[i] = (f.sy_[i + 1] - f.sy_[i]) / hr - (f.sy_[i] - f.sy_[i - 1]) / hl;
  }
  std::vector<double> m(n, 0.0), cp(n, 0.0), rp(n, 0.0);
  cp[0] = c[0] / b[0];
  rp[0] = r[0] / b[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double den = b[i] - a[i] * cp[i - 1];
    cp[i] = c[i] / den;
    rp[i] = (r[i] - a[i] * rp[i - 1]) / den;
  }
  m[n - 1] = rp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = rp[i] - cp[i] * m[i + 1];
  f.sm_ = std::move(m);
  return f;
}

double ScalarFlux::spline_value(double u) const {
  const std::size_t n = sx_.size();
  if (u <= sx_.front()) {
    const double h = sx_[1] - sx_[0];
    const double slope = (sy_[1] - sy_[0]) / h - h / 6.0 * (2.0 * sm_[0] + sm_[1]);
    return sy_.front() + slope * (u - sx_.front());
  }
  if (u >= sx_.back()) {
    const double h = sx_[n - 1] - sx_[n - 2];
    const double slope = (sy_[n - 1] - sy_[n - 2]) / h + h / 6.0 * (sm_[n - 2] + 2.0 * sm_[n - 1]);
    return sy_.back() + slope * (u - sx_.back());
  }
  const auto it = std::upper_bound(sx_.begin(), sx_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - sx_.begin()) - 1;
  const double h = sx_[i + 1] - sx_[i];
  const double t0 = (sx_[i + 1] - u) / h;
  const double t1 = (u - sx_[i]) / h;
  return t0 * sy_[i] + t1 * sy_[i + 1] +
         ((t0 * t0 * t0 - t0) * sm_[i] + (t1 * t1 * t1 - t1) * sm_[i + 1]) * h * h / 6.0;
}

double ScalarFlux::value(double u) const {
  return kind_ == Kind::poly ? horner(coeff_, u) : spline_value(u);
}

double ScalarFlux::d1(double u) const {
  if (kind_ == Kind::poly) return horner(dcoeff_, u);
  const double h = 1e-6;
  return (spline_value(u + h) - spline_value(u - h)) / (2.0 * h);
}

double ScalarFlux::d2(double u) const {
  if (kind_ == Kind::poly) return horner(ddcoeff_, u);
  const double h = 1e-6;
  return (spline_value(u + h) - 2.0 * spline_value(u) + spline_value(u - h)) / (h * h);
}

double ValidatedFluxPair::max_speed(const StateInterval& iv) const {
  double s = 0.0;
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    const double u = iv.lo + (iv.hi - iv.lo) * i / n;
    s = std::max(s, std::max(std::abs(fl.d1(u)), std::abs(fr.d1(u))));
  }
  return s;
}

ValidatedFluxPair validate_flux_pair(ScalarFlux fl, ScalarFlux fr, double range_lo,
                                     double range_hi, bool identical_mode, int samples) {
  if (!(range_lo < range_hi)) throw DomainError("validate_flux_pair: empty eval_range");
  ValidatedFluxPair p;
  p.fl = std::move(fl);
  p.fr = std::move(fr);
  p.range_lo = range_lo;
  p.range_hi = range_hi;
  p.identical = identical_mode;

  // H1: sampled uniform convexity on eval_range.
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double u = range_lo + (range_hi - range_lo) * i / samples;
    const double cl = p.fl.d2(u);
    const double cr = p.fr.d2(u);
    if (!(cl > 0.0) || !(cr > 0.0))
      throw NonConvex("sampled f'' <= 0 at u = " + std::to_string(u));
    c = std::min(c, std::min(cl, cr));
  }
  p.c = c;

  // Minimizers by sign change of f' (f' is increasing under H1).
  auto find_theta = [&](const ScalarFlux& f) {
    if (!(f.d1(range_lo) < 0.0 && f.d1(range_hi) > 0.0))
      throw DomainError("validate_flux_pair: eval_range does not bracket a minimizer");
    return detail::bisect([&](double u) { return f.d1(u); }, range_lo, range_hi, 1e-15);
  };
  p.theta_l = find_theta(p.fl);
  p.theta_r = find_theta(p.fr);

  if (identical_mode) {
    p.crossing_lo = p.crossing_hi = p.theta_l;
    return p;
  }

  // Crossings of f_l and f_r: sign changes of the difference plus tangential
  // zeros (LWR-type diagrams touch at the ends of the physical range).
  auto diff = [&](double u) { return p.fl.value(u) - p.fr.value(u); };
  double fscale = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double u = range_lo + (range_hi - range_lo) * i / 32;
    fscale = std::max(fscale, std::abs(p.fl.value(u)) + std::abs(p.fr.value(u)));
  }
  const double zero_tol = 1e-11 * (1.0 + fscale);
  const double h = (range_hi - range_lo) / samples;
  std::vector<double> roots;
  double prev_u = range_lo;
  double prev_d = diff(range_lo);
  bool in_cluster = std::abs(prev_d) <= zero_tol;
  double cluster_lo = range_lo;
  auto close_cluster = [&](double cluster_hi) {
    // tangential or endpoint zero: minimize |d| over the cluster window
    double a = std::max(range_lo, cluster_lo - h);
    double b = std::min(range_hi, cluster_hi + h);
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (std::abs(diff(m1)) <= std::abs(diff(m2)))
        b = m2;
      else
        a = m1;
    }
    roots.push_back(0.5 * (a + b));
  };
  for (int i = 1; i <= samples; ++i) {
    const double u = range_lo + (range_hi - range_lo) * i / samples;
    const double d = diff(u);
    if ((prev_d < -zero_tol && d > zero_tol) || (prev_d > zero_tol && d < -zero_tol))
      roots.push_back(detail::bisect(diff, prev_u, u, 1e-15));
    if (std::abs(d) <= zero_tol) {
      if (!in_cluster) cluster_lo = u;
      in_cluster = true;
    } else if (in_cluster) {
      close_cluster(prev_u);
      in_cluster = false;
    }
    prev_u = u;
    prev_d = d;
  }
  if (in_cluster) close_cluster(range_hi);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <=
                                   1e-6 * (range_hi - range_lo);
                          }),
              roots.end());
  if (roots.size() < 2)
    throw NoCrossing("found " + std::to_string(roots.size()) +
                     " crossings of f_l and f_r; two are required");
  if (roots.size() > 2)
    throw NoCrossing("found " + std::to_string(roots.size()) +
                     " crossings of f_l and f_r; exactly two are required");
  p.crossing_lo = roots.front();
  p.crossing_hi = roots.back();

  // Generalized H3: theta_l >= u0 and theta_r <= u1.
  const double tol = 1e-9 * (1.0 + std::abs(p.crossing_lo) + std::abs(p.crossing_hi));
  if (p.theta_l < p.crossing_lo - tol || p.theta_r > p.crossing_hi + tol)
    throw OrderViolation("minimizers violate theta_l >= u0, theta_r <= u1");
  return p;
}

double branch_inverse(const ValidatedFluxPair& pair, Side side, Branch branch, double y) {
  const ScalarFlux& f = pair.flux(side);
  const double th = pair.theta(side);
  const double fmin = f.value(th);
  const double tol = 1e-12 * (1.0 + std::abs(y));
  if (y < fmin - tol)
    throw BelowMinimum("branch_inverse: y below the flux minimum");
  if (y <= fmin) return th;

  double lo, hi;
  if (branch == Branch::plus) {
    lo = th;
    double w = 1.0;
    hi = th + w;
    int guard = 0;
    while (f.value(hi) < y) {
      w *= 2.0;
      hi = th + w;
      if (++guard > 200) throw DomainError("branch_inverse: bracket expansion failed");
    }
    return detail::bisect([&](double u) { return f.value(u) - y; }, lo, hi, 1e-15);
  }
  hi = th;
  double w = 1.0;
  lo = th - w;
  int guard = 0;
  while (f.value(lo) < y) {
    w *= 2.0;
    lo = th - w;
    if (++guard > 200) throw DomainError("branch_inverse: bracket expansion failed");
  }
  return detail::bisect([&](double u) { return f.value(u) - y; }, lo, hi, 1e-15);
}

double speed_inverse(const ValidatedFluxPair& pair, Side side, double slope) {
  const ScalarFlux& f = pair.flux(side);
  const double th = pair.theta(side);
  double lo = th, hi = th;
  double w = 1.0;
  int guard = 0;
  if (slope >= 0.0) {
    hi = th + w;
    while (f.d1(hi) < slope) {
      w *= 2.0;
      hi = th + w;
      if (++guard > 200) throw DomainError("speed_inverse: bracket expansion failed");
    }
  } else {
    lo = th - w;
    while (f.d1(lo) > slope) {
      w *= 2.0;
      lo = th - w;
      if (++guard > 200) throw DomainError("speed_inverse: bracket expansion failed");
    }
  }
  return detail::bisect([&](double u) { return f.d1(u) - slope; }, lo, hi, 1e-15);
}

double pi_map(const ValidatedFluxPair& pair, PiKind kind, double u) {
  switch (kind) {
    case PiKind::l_minus:
      return branch_inverse(pair, Side::left, Branch::minus, pair.f(Side::left, u));
    case PiKind::l_plus:
      return branch_inverse(pair, Side::left, Branch::plus, pair.f(Side::left, u));
    case PiKind::r_minus:
      return branch_inverse(pair, Side::right, Branch::minus, pair.f(Side::right, u));
    case PiKind::r_plus:
      return branch_inverse(pair, Side::right, Branch::plus, pair.f(Side::right, u));
    case PiKind::l_minus_r:
      return branch_inverse(pair, Side::left, Branch::minus, pair.f(Side::right, u));
    case PiKind::l_plus_r:
      return branch_inverse(pair, Side::left, Branch::plus, pair.f(Side::right, u));
    case PiKind::r_minus_l:
      return branch_inverse(pair, Side::right, Branch::minus, pair.f(Side::left, u));
    case PiKind::r_plus_l:
      return branch_inverse(pair, Side::right, Branch::plus, pair.f(Side::left, u));
  }
  throw DomainError("pi_map: unknown kind");
}

double critical_level(const ValidatedFluxPair& pair) {
  return std::max(pair.min_flux(Side::left), pair.min_flux(Side::right));
}

Connection connection_from_level(const ValidatedFluxPair& pair, double gamma) {
  const double lo = critical_level(pair);
  if (gamma < lo - 1e-12 * (1.0 + std::abs(gamma)))
    throw BelowMinimum("connection level below max of the flux minima");
  Connection c;
  c.gamma = std::max(gamma, lo);
  c.A = branch_inverse(pair, Side::left, Branch::minus, c.gamma);
  c.B = branch_inverse(pair, Side::right, Branch::plus, c.gamma);
  return c;
}

Connection connection_from_states(const ValidatedFluxPair& pair, double A, double B,
                                  double tol) {
  const double ga = pair.f(Side::left, A);
  const double gb = pair.f(Side::right, B);
  if (std::abs(ga - gb) > tol * (1.0 + std::abs(ga)))
    throw DomainError("connection states violate f_l(A) = f_r(B)");
  if (A > pair.theta_l + tol || B < pair.theta_r - tol)
    throw DomainError("connection states violate A <= theta_l, B >= theta_r");
  return Connection{A, B, 0.5 * (ga + gb)};
}

std::pair<ValidatedFluxPair, ConcaveAdapter> adapt_concave(const ScalarFlux& gl,
                                                           const ScalarFlux& gr,
                                                           double rho_max,
                                                           bool identical_mode) {
  if (!(rho_max > 0.0)) throw DomainError("adapt_concave: rho_max must be positive");
  auto reflect = [](const ScalarFlux& g) {
    if (!g.is_polynomial())
      throw DomainError("adapt_concave: only polynomial concave fluxes are supported");
    std::vector<double> c = g.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] = (k % 2 == 0) ? -c[k] : c[k];  // f(u) = -g(-u)
    return ScalarFlux::polynomial(std::move(c));
  };
  // concavity check before transforming
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    const double rho = rho_max * i / n;
    if (!(gl.d2(rho) < 0.0) || !(gr.d2(rho) < 0.0))
      throw NonConcave("sampled g'' >= 0 at rho = " + std::to_string(rho));
  }
  ValidatedFluxPair pair =
      validate_flux_pair(reflect(gl), reflect(gr), -rho_max, 0.0, identical_mode);
  return {std::move(pair), ConcaveAdapter{rho_max}};
}

StateInterval invariant_interval(const ValidatedFluxPair& pair, const Connection& conn,
                                 double data_lo, double data_hi) {
  double a = std::min({data_lo, conn.A, conn.B});
  double b = std::max({data_hi, conn.A, conn.B});
  double lo = a, hi = b;
  try {
    lo = std::min(lo, pi_map(pair, PiKind::l_minus_r, a));
  } catch (const BelowMinimum&) {
  }
  try {
    hi = std::max(hi, pi_map(pair, PiKind::r_plus_l, b));
  } catch (const BelowMinimum&) {
  }
  return StateInterval{lo, hi};
}

}  // namespace abflux
