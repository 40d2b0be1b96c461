#include "abflux/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace abflux {

AdmissibleSet AdmissibleSet::uniform(double k_lo, double k_hi, double lo, double hi, int m) {
  if (!(k_hi > k_lo) || m < 1) throw DomainError("admissible set: empty support");
  AdmissibleSet s;
  s.support_lo = k_lo;
  s.support_hi = k_hi;
  const double w = (k_hi - k_lo) / m;
  for (int i = 0; i < m; ++i)
    s.boxes.push_back(Box{k_lo + i * w, k_lo + (i + 1) * w, lo, hi});
  return s;
}

std::pair<double, double> AdmissibleSet::bounds_at(double x) const {
  for (const auto& b : boxes)
    if (x >= b.x_lo && x < b.x_hi) return {b.lo, b.hi};
  return {0.0, 0.0};
}

std::pair<double, double> AdmissibleSet::value_range() const {
  double lo = 0.0, hi = 0.0;
  for (const auto& b : boxes) {
    lo = std::min(lo, b.lo);
    hi = std::max(hi, b.hi);
  }
  return {lo, hi};
}

ControlVector project(const ControlVector& v, const AdmissibleSet& set, double gamma_lo,
                      double gamma_hi) {
  if (v.cells.size() != set.boxes.size())
    throw DomainError("control vector size does not match the admissible set");
  ControlVector out = v;
  for (std::size_t i = 0; i < out.cells.size(); ++i)
    out.cells[i] = std::clamp(out.cells[i], set.boxes[i].lo, set.boxes[i].hi);
  out.gamma = std::clamp(out.gamma, gamma_lo, gamma_hi);
  return out;
}

Profile control_profile(const ControlVector& v, const AdmissibleSet& set) {
  std::vector<double> xs, us;
  xs.push_back(set.support_lo - 1.0);
  us.push_back(0.0);
  xs.push_back(set.support_lo);
  us.push_back(0.0);
  for (std::size_t i = 0; i < set.boxes.size(); ++i) {
    xs.push_back(set.boxes[i].x_lo);
    us.push_back(v.cells[i]);
    xs.push_back(set.boxes[i].x_hi);
    us.push_back(v.cells[i]);
  }
  xs.push_back(set.support_hi);
  us.push_back(0.0);
  xs.push_back(set.support_hi + 1.0);
  us.push_back(0.0);
  return Profile::from_samples(xs, us);
}

double objective_l2(const Profile& profile, const Profile& target, double window_lo,
                    double window_hi, double dx) {
  const int n = std::max(1, static_cast<int>(std::lround((window_hi - window_lo) / dx)));
  const double h = (window_hi - window_lo) / n;
  double J = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = window_lo + (i + 0.5) * h;
    const double d = profile.value(x) - target.value(x);
    J += d * d * h;
  }
  return J;
}

double objective_l2(const std::vector<double>& cells, const Grid& grid,
                    const Profile& target, double window_lo, double window_hi) {
  double J = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    if (x < window_lo || x > window_hi) continue;
    const double d = cells[static_cast<std::size_t>(i)] - target.value(x);
    J += d * d * grid.dx;
  }
  return J;
}

double objective_fuel(const Field& field, const std::vector<double>& P_coeffs,
                      const std::function<double(double)>& velocity,
                      const ConcaveAdapter& adapter, double window_lo, double window_hi,
                      double horizon) {
  auto poly = [&](double v) {
    double r = 0.0;
    for (auto it = P_coeffs.rbegin(); it != P_coeffs.rend(); ++it) r = r * v + *it;
    return r;
  };
  auto level_integral = [&](const std::vector<double>& state) {
    double s = 0.0;
    for (int i = 0; i < field.grid.n_cells; ++i) {
      const double x = field.grid.center(i);
      if (x < window_lo || x > window_hi) continue;
      const double rho = adapter.to_concave_state(state[static_cast<std::size_t>(i)]);
      if (rho == 0.0) continue;
      s += rho * poly(velocity(rho)) * field.grid.dx;
    }
    return s;
  };
  // trapezoid over the stored levels up to the horizon
  double J = 0.0;
  for (std::size_t k = 0; k + 1 < field.times.size(); ++k) {
    const double t0 = field.times[k], t1 = field.times[k + 1];
    if (t0 >= horizon) break;
    const double dt = std::min(t1, horizon) - t0;
    J += 0.5 * dt * (level_integral(field.states[k]) + level_integral(field.states[k + 1]));
  }
  return J;
}

namespace {

struct NmPoint {
  std::vector<double> z;  // cells followed by gamma
  double J = 0.0;
};

}  // namespace

OptimizationResult optimize(const OptimizeProblem& prob) {
  if (prob.budget < 1) throw DomainError("optimize: budget must be >= 1");
  const std::size_t m = prob.controls.boxes.size();
  const std::size_t dim = m + 1;
  std::mt19937_64 rng(prob.seed);

  OptimizationResult res;
  res.best.cells.assign(m, 0.0);

  auto to_control = [&](const std::vector<double>& z) {
    ControlVector v;
    v.cells.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m));
    v.gamma = z.back();
    return project(v, prob.controls, prob.gamma_lo, prob.gamma_hi);
  };
  auto evaluate = [&](const std::vector<double>& z) {
    const ControlVector v = to_control(z);
    const double J = prob.objective(v);
    ++res.evaluations;
    if (res.history.empty() || J < res.J) {
      res.J = J;
      res.best = v;
      res.history.emplace_back(res.evaluations, J);
    }
    return J;
  };

  // start at the box centers / gamma midpoint
  std::vector<double> center(dim);
  bool frozen = true;
  for (std::size_t i = 0; i < m; ++i) {
    center[i] = 0.5 * (prob.controls.boxes[i].lo + prob.controls.boxes[i].hi);
    if (prob.controls.boxes[i].hi > prob.controls.boxes[i].lo) frozen = false;
  }
  center[m] = 0.5 * (prob.gamma_lo + prob.gamma_hi);
  if (prob.gamma_hi > prob.gamma_lo) frozen = false;

  if (frozen) {  // singleton feasible set: one evaluation suffices
    evaluate(center);
    return res;
  }

  auto random_point = [&]() {
    std::vector<double> z(dim);
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_real_distribution<double> d(prob.controls.boxes[i].lo,
                                               prob.controls.boxes[i].hi);
      z[i] = d(rng);
    }
    std::uniform_real_distribution<double> dg(prob.gamma_lo, prob.gamma_hi);
    z[m] = prob.gamma_lo == prob.gamma_hi ? prob.gamma_lo : dg(rng);
    return z;
  };

  auto width = [&](std::size_t i) {
    if (i < m) return prob.controls.boxes[i].hi - prob.controls.boxes[i].lo;
    return prob.gamma_hi - prob.gamma_lo;
  };

  std::vector<double> start = center;
  bool first_start = true;
  while (res.evaluations < prob.budget) {
    // initial simplex around the start point
    std::vector<NmPoint> simplex;
    {
      NmPoint p0;
      p0.z = start;
      p0.J = evaluate(p0.z);
      simplex.push_back(p0);
      for (std::size_t i = 0; i < dim && res.evaluations < prob.budget; ++i) {
        if (width(i) <= 0.0) continue;
        NmPoint p = p0;
        p.z[i] += 0.25 * width(i) * (p.z[i] > center[i] ? -1.0 : 1.0);
        p.J = evaluate(p.z);
        simplex.push_back(p);
      }
    }
    if (simplex.size() < 2) break;

    auto order = [&]() {
      std::sort(simplex.begin(), simplex.end(),
                [](const NmPoint& a, const NmPoint& b) { return a.J < b.J; });
    };
    order();

    int stale = 0;
    while (res.evaluations < prob.budget) {
      const std::size_t nv = simplex.size();
      std::vector<double> cen(dim, 0.0);
      for (std::size_t i = 0; i + 1 < nv; ++i)
        for (std::size_t j = 0; j < dim; ++j) cen[j] += simplex[i].z[j] / double(nv - 1);
      auto blend = [&](double coef) {
        std::vector<double> z(dim);
        for (std::size_t j = 0; j < dim; ++j)
          z[j] = cen[j] + coef * (cen[j] - simplex[nv - 1].z[j]);
        return z;
      };
      const double fbest = simplex[0].J;
      NmPoint refl{blend(1.0), 0.0};
      refl.J = evaluate(refl.z);
      if (refl.J < simplex[0].J && res.evaluations < prob.budget) {
        NmPoint exp_{blend(2.0), 0.0};
        exp_.J = evaluate(exp_.z);
        simplex[nv - 1] = exp_.J < refl.J ? exp_ : refl;
      } else if (refl.J < simplex[nv - 2].J) {
        simplex[nv - 1] = refl;
      } else if (res.evaluations < prob.budget) {
        NmPoint con{blend(-0.5), 0.0};
        con.J = evaluate(con.z);
        if (con.J < simplex[nv - 1].J) {
          simplex[nv - 1] = con;
        } else {  // shrink towards the best vertex
          for (std::size_t i = 1; i < nv && res.evaluations < prob.budget; ++i) {
            for (std::size_t j = 0; j < dim; ++j)
              simplex[i].z[j] = simplex[0].z[j] + 0.5 * (simplex[i].z[j] - simplex[0].z[j]);
            simplex[i].J = evaluate(simplex[i].z);
          }
        }
      }
      order();
      stale = simplex[0].J < fbest - 1e-15 * (1.0 + std::abs(fbest)) ? 0 : stale + 1;
      double size = 0.0;
      for (std::size_t j = 0; j < dim; ++j)
        size = std::max(size, std::abs(simplex[0].z[j] - simplex[nv - 1].z[j]) /
                                  (width(j) > 0.0 ? width(j) : 1.0));
      if (size < 1e-7 || stale > 60) break;  // restart
    }
    start = random_point();
    first_start = false;
  }
  (void)first_start;
  return res;
}

}  // namespace abflux
