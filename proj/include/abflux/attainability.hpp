#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abflux/fluxes.hpp"
#include "abflux/profile.hpp"
#include "abflux/riemann.hpp"

namespace abflux {

enum class AttainClass { A1, A2, A3, none };

std::string to_string(AttainClass c);

/// Tolerances used by the membership checker. exact() is for analytically
/// given profiles; scaled(h) loosens everything to O(h) for profiles read off
/// a numerical solution with resolution h.
struct ToleranceSet {
  double ineq = 1e-9;           // slack on the non-strict inequalities
  double mono = 1e-9;           // allowed negative forward difference of phi
  double strict_margin = 1e-9;  // required margin for strict monotonicity of psi
  double jump = 1e-9;           // slack on downward-jump conditions
  double trace = 1e-9;          // slack on trace-set membership
  double plateau = 1e-9;        // deviation allowed on the A/B plateaus
  double wedge = 1e-9;          // slack on emission-wedge containment

  static ToleranceSet exact() { return {}; }
  static ToleranceSet scaled(double h) {
    ToleranceSet t;
    t.ineq = t.mono = t.jump = t.trace = t.plateau = t.wedge = h;
    t.strict_margin = 1e-9;
    return t;
  }
};

struct Violation {
  std::string condition;
  double x = 0.0;
  double margin = 0.0;  // how far past the boundary (positive = violated)
};

struct WitnessCandidate {
  AttainClass cls = AttainClass::none;
  TraceClass trace_tag = TraceClass::inadmissible;
  std::optional<double> L;
  std::optional<double> R;
};

struct AttainabilityReport {
  bool member = false;
  AttainClass cls = AttainClass::none;
  TraceClass trace_tag = TraceClass::inadmissible;
  std::optional<double> L;
  std::optional<double> R;
  std::vector<Violation> violations;      // of the best-scoring candidate
  std::vector<std::string> boundary_log;  // inequalities within tolerance of equality
  ToleranceSet tol;
};

enum class CharMapKind { phi1, phi2, phi3, psi1, psi2 };

struct CharSample {
  double x = 0.0;
  double left = 0.0, right = 0.0;  // one-sided map values
  bool left_ok = true, right_ok = true;
};

struct CharacteristicMap {
  CharMapKind kind = CharMapKind::phi1;
  double horizon = 0.0;
  std::vector<CharSample> samples;  // sorted in x
};

/// Foot-point map of backward characteristics for the given class.
CharacteristicMap phi_map(const Profile& omega, double T, const ValidatedFluxPair& pair,
                          const Connection& conn, AttainClass cls,
                          std::optional<double> L, std::optional<double> R,
                          int per_piece = 64);

/// Interface-crossing-time map (classes A1 and A2 only).
CharacteristicMap psi_map(const Profile& omega, double T, const ValidatedFluxPair& pair,
                          const Connection& conn, AttainClass cls,
                          std::optional<double> L, std::optional<double> R,
                          int per_piece = 64);

/// Candidate (class, witnesses) list derived from the trace pair at x = 0.
std::vector<WitnessCandidate> find_witnesses(const Profile& omega, double T,
                                             const ValidatedFluxPair& pair,
                                             const Connection& conn,
                                             const ToleranceSet& tol = {});

/// Decides membership of omega in A1(T) u A2(T) u A3^{AB}(T) through the
/// monotone-map formulation.
AttainabilityReport check_membership(const Profile& omega, double T,
                                     const ValidatedFluxPair& pair,
                                     const Connection& conn,
                                     const ToleranceSet& tol = {});

}  // namespace abflux
