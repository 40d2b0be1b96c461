#pragma once

#include <utility>
#include <vector>

#include "abflux/common.hpp"

namespace abflux {

struct ProfilePiece {
  double x0 = 0.0, x1 = 0.0;  // x0 < x1
  double u0 = 0.0, u1 = 0.0;  // values at the two ends (affine in between)
  double slope() const { return (u1 - u0) / (x1 - x0); }
  double at(double x) const { return u0 + (u1 - u0) * (x - x0) / (x1 - x0); }
};

/// Bounded piecewise-affine function of x with finitely many jump breakpoints
/// and constant tails. x = 0 is always a piece boundary; one-sided limits are
/// exact everywhere.
class Profile {
 public:
  Profile() = default;

  static Profile constant(double v);
  /// From explicit pieces plus tail values; pieces must be contiguous in x.
  static Profile from_pieces(std::vector<ProfilePiece> pieces, double left_tail,
                             double right_tail);
  /// Piecewise-linear interpolant of samples (x strictly increasing).
  /// Duplicate x values encode jumps. Collinear runs are merged.
  static Profile from_samples(const std::vector<double>& x, const std::vector<double>& u);

  const std::vector<ProfilePiece>& pieces() const { return pieces_; }
  double left_tail() const { return left_tail_; }
  double right_tail() const { return right_tail_; }

  double left_limit(double x) const;
  double right_limit(double x) const;
  /// (left limit, right limit) at x.
  std::pair<double, double> limits(double x) const;
  /// Value with right-continuous convention at jumps.
  double value(double x) const { return right_limit(x); }

  /// Sorted piece endpoints (including tails' inner boundaries).
  std::vector<double> breakpoints() const;
  /// Piece endpoints where left limit != right limit (within tol).
  std::vector<double> jump_points(double tol = 0.0) const;

  double min_value() const;
  double max_value() const;
  double sup_abs() const;

  /// Exact mean of the profile over [a, b].
  double average(double a, double b) const;
  /// Exact integral of the profile over [a, b].
  double integral(double a, double b) const;

  /// Rescales x -> lambda x (values unchanged).
  Profile rescaled(double lambda) const;

  bool empty() const { return pieces_.empty(); }
  double domain_lo() const { return pieces_.empty() ? 0.0 : pieces_.front().x0; }
  double domain_hi() const { return pieces_.empty() ? 0.0 : pieces_.back().x1; }

 private:
  std::vector<ProfilePiece> pieces_;
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
  void ensure_zero_boundary();
  void validate() const;
};

/// Exact L1 distance between two profiles over [lo, hi].
double l1_distance(const Profile& a, const Profile& b, double lo, double hi,
                   int refine = 8);

/// Exact L1 norm of a profile over [lo, hi].
double l1_norm(const Profile& p, double lo, double hi);

}  // namespace abflux
