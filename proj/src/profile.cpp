#include "abflux/profile.hpp"

#include <algorithm>
#include <cmath>

namespace abflux {

namespace {
constexpr double kMergeTol = 1e-14;
}

Profile Profile::constant(double v) {
  Profile p;
  p.pieces_ = {ProfilePiece{-1.0, 0.0, v, v}, ProfilePiece{0.0, 1.0, v, v}};
  p.left_tail_ = v;
  p.right_tail_ = v;
  return p;
}

Profile Profile::from_pieces(std::vector<ProfilePiece> pieces, double left_tail,
                             double right_tail) {
  Profile p;
  p.pieces_ = std::move(pieces);
  p.left_tail_ = left_tail;
  p.right_tail_ = right_tail;
  p.validate();
  p.ensure_zero_boundary();
  return p;
}

Profile Profile::from_samples(const std::vector<double>& x, const std::vector<double>& u) {
  if (x.size() != u.size() || x.size() < 2)
    throw ParseError("profile samples need at least two (x, u) points");
  std::vector<ProfilePiece> ps;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i + 1] < x[i] - kMergeTol)
      throw ParseError("profile sample x values must be nondecreasing");
    if (x[i + 1] - x[i] <= kMergeTol) continue;  // duplicate x encodes a jump
    ps.push_back(ProfilePiece{x[i], x[i + 1], u[i], u[i + 1]});
  }
  if (ps.empty()) throw ParseError("profile samples span zero width");
  // merge collinear neighbours
  std::vector<ProfilePiece> merged;
  for (const auto& q : ps) {
    if (!merged.empty()) {
      auto& m = merged.back();
      const bool contiguous = std::abs(m.x1 - q.x0) <= kMergeTol &&
                              std::abs(m.u1 - q.u0) <= kMergeTol;
      if (contiguous && std::abs(m.slope() - q.slope()) <= 1e-12 &&
          !(m.x1 <= 0.0 && q.x0 >= 0.0 && m.x1 == 0.0)) {
        m.x1 = q.x1;
        m.u1 = q.u1;
        continue;
      }
    }
    merged.push_back(q);
  }
  return from_pieces(std::move(merged), merged.empty() ? 0.0 : merged.front().u0,
                     merged.empty() ? 0.0 : ps.back().u1);
}

void Profile::validate() const {
  if (pieces_.empty()) throw ParseError("profile needs at least one piece");
  for (const auto& p : pieces_) {
    if (!(p.x1 > p.x0)) throw ParseError("profile piece with nonpositive width");
    if (!std::isfinite(p.u0) || !std::isfinite(p.u1) || !std::isfinite(p.x0) ||
        !std::isfinite(p.x1))
      throw InvariantViolation("profile piece with non-finite entries");
  }
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (pieces_[i].x0 < pieces_[i - 1].x1 - kMergeTol)
      throw ParseError("profile pieces overlap");
    if (pieces_[i].x0 > pieces_[i - 1].x1 + kMergeTol)
      throw ParseError("profile pieces leave a gap");
  }
}

void Profile::ensure_zero_boundary() {
  if (pieces_.front().x0 >= 0.0 || pieces_.back().x1 <= 0.0) {
    // x = 0 lies in a tail; extend the covered interval so 0 becomes a boundary
    if (pieces_.front().x0 > 0.0) {
      const double x0 = pieces_.front().x0;
      pieces_.insert(pieces_.begin(), ProfilePiece{0.0, x0, left_tail_, left_tail_});
    } else if (pieces_.back().x1 < 0.0) {
      const double x1 = pieces_.back().x1;
      pieces_.push_back(ProfilePiece{x1, 0.0, right_tail_, right_tail_});
    }
    return;
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto& p = pieces_[i];
    if (p.x0 < 0.0 && p.x1 > 0.0) {
      const double mid = p.at(0.0);
      ProfilePiece rightp{0.0, p.x1, mid, p.u1};
      p.x1 = 0.0;
      p.u1 = mid;
      pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(i) + 1, rightp);
      return;
    }
  }
}

double Profile::left_limit(double x) const {
  if (x <= pieces_.front().x0) return left_tail_;
  if (x > pieces_.back().x1) return right_tail_;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it)
    if (x > it->x0 && x <= it->x1) return it->at(x);
  return left_tail_;
}

double Profile::right_limit(double x) const {
  if (x < pieces_.front().x0) return left_tail_;
  if (x >= pieces_.back().x1) return right_tail_;
  for (const auto& p : pieces_)
    if (x >= p.x0 && x < p.x1) return p.at(x);
  return right_tail_;
}

std::pair<double, double> Profile::limits(double x) const {
  return {left_limit(x), right_limit(x)};
}

std::vector<double> Profile::breakpoints() const {
  std::vector<double> b;
  b.push_back(pieces_.front().x0);
  for (const auto& p : pieces_) b.push_back(p.x1);
  return b;
}

std::vector<double> Profile::jump_points(double tol) const {
  std::vector<double> out;
  for (double x : breakpoints())
    if (std::abs(left_limit(x) - right_limit(x)) > tol) out.push_back(x);
  return out;
}

double Profile::min_value() const {
  double m = std::min(left_tail_, right_tail_);
  for (const auto& p : pieces_) m = std::min(m, std::min(p.u0, p.u1));
  return m;
}

double Profile::max_value() const {
  double m = std::max(left_tail_, right_tail_);
  for (const auto& p : pieces_) m = std::max(m, std::max(p.u0, p.u1));
  return m;
}

double Profile::sup_abs() const { return std::max(std::abs(min_value()), std::abs(max_value())); }

double Profile::integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  const double lo = pieces_.front().x0;
  const double hi = pieces_.back().x1;
  if (a < lo) total += left_tail_ * (std::min(b, lo) - a);
  if (b > hi) total += right_tail_ * (b - std::max(a, hi));
  for (const auto& p : pieces_) {
    const double x0 = std::max(a, p.x0);
    const double x1 = std::min(b, p.x1);
    if (x1 <= x0) continue;
    total += 0.5 * (p.at(x0) + p.at(x1)) * (x1 - x0);
  }
  return total;
}

double Profile::average(double a, double b) const { return integral(a, b) / (b - a); }

Profile Profile::rescaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("rescaled: lambda must be positive");
  std::vector<ProfilePiece> ps;
  for (const auto& p : pieces_)
    ps.push_back(ProfilePiece{lambda * p.x0, lambda * p.x1, p.u0, p.u1});
  return from_pieces(std::move(ps), left_tail_, right_tail_);
}

double l1_norm(const Profile& p, double lo, double hi) {
  Profile zero = Profile::constant(0.0);
  return l1_distance(p, zero, lo, hi);
}

double l1_distance(const Profile& a, const Profile& b, double lo, double hi, int refine) {
  // integrate |a - b| exactly per subinterval of the merged breakpoint set,
  // splitting each affine-difference segment at its sign change
  std::vector<double> xs;
  xs.push_back(lo);
  xs.push_back(hi);
  for (double x : a.breakpoints())
    if (x > lo && x < hi) xs.push_back(x);
  for (double x : b.breakpoints())
    if (x > lo && x < hi) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  (void)refine;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i], x1 = xs[i + 1];
    const double d0 = a.right_limit(x0) - b.right_limit(x0);
    const double d1 = a.left_limit(x1) - b.left_limit(x1);
    if (d0 * d1 >= 0.0) {
      total += 0.5 * std::abs(d0 + d1) * (x1 - x0);
    } else {
      const double xc = x0 + (x1 - x0) * d0 / (d0 - d1);
      total += 0.5 * std::abs(d0) * (xc - x0) + 0.5 * std::abs(d1) * (x1 - xc);
    }
  }
  return total;
}

}  // namespace abflux
