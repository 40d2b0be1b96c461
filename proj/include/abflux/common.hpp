#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace abflux {

// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NonConvex : Error {
  explicit NonConvex(const std::string& m) : Error(m) {}
};
struct NonConcave : Error {
  explicit NonConcave(const std::string& m) : Error(m) {}
};
struct NoCrossing : Error {
  explicit NoCrossing(const std::string& m) : Error(m) {}
};
struct OrderViolation : Error {
  explicit OrderViolation(const std::string& m) : Error(m) {}
};
struct BelowMinimum : Error {
  explicit BelowMinimum(const std::string& m) : Error(m) {}
};
struct BadDomain : Error {
  explicit BadDomain(const std::string& m) : Error(m) {}
};
struct CFLViolation : Error {
  explicit CFLViolation(const std::string& m) : Error(m) {}
};
struct NonFinite : Error {
  explicit NonFinite(const std::string& m) : Error(m) {}
};
struct NoSolution : Error {
  explicit NoSolution(const std::string& m) : Error(m) {}
};
struct MembershipRequired : Error {
  explicit MembershipRequired(const std::string& m) : Error(m) {}
};
struct BracketFailure : Error {
  explicit BracketFailure(const std::string& m) : Error(m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(m) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(m) {}
};
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& m) : Error(m) {}
};

enum class Side { left, right };
enum class Branch { minus, plus };

// Closed state interval [lo, hi].
struct StateInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double u, double tol = 0.0) const {
    return u >= lo - tol && u <= hi + tol;
  }
};

namespace detail {

// Bisection for a continuous g with g(a), g(b) of opposite (or zero) sign.
// Returns a root to absolute tolerance xtol on the state axis.
template <class F>
double bisect(F&& g, double a, double b, double xtol = 1e-14) {
  double fa = g(a);
  double fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw BracketFailure("bisect: endpoints do not bracket a root");
  for (int it = 0; it < 200 && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = g(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace detail

}  // namespace abflux
