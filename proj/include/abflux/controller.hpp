#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "abflux/attainability.hpp"
#include "abflux/profile.hpp"
#include "abflux/solver.hpp"

namespace abflux {

/// Backward polygonal line through a time-T evaluation point: straight on its
/// own side, refracted at x = 0 when it crosses the interface.
struct FanLine {
  double y = 0.0;           // evaluation point at t = T
  bool left_side = true;    // which one-sided limit of omega it carries
  double foot = 0.0;        // position at t = 0 (the phi value)
  std::optional<double> crossing_time;
  std::vector<std::pair<double, double>> vertices;  // (t, x), t ascending
  double initial_value = 0.0;                       // value carried at the foot
};

struct BackwardFan {
  AttainClass cls = AttainClass::none;
  TraceClass trace_tag = TraceClass::inadmissible;
  double T = 0.0;
  double L = 0.0, R = 0.0;
  std::vector<FanLine> lines;  // ordered by (y, side)
  double min_foot_gap = 0.0;   // min over consecutive lines of foot differences
};

struct CompressionInterval {
  double x_lo = 0.0, x_hi = 0.0;
  double y = 0.0;       // shock formation point at time T
  bool crossing = false;  // initial segment refracts through x = 0
  Side side = Side::left;  // flux governing the initial segment
};

struct PlateauInterval {
  double x_lo = 0.0, x_hi = 0.0;
  double value = 0.0;
  std::string label;
};

struct InitialPartition {
  std::vector<double> rarefaction_centers;             // I_R
  std::vector<CompressionInterval> compressions;       // I_C
  std::vector<std::pair<double, double>> wave_intervals;  // I_W (transported feet)
  std::vector<PlateauInterval> plateaus;               // A3 / T3 special fills
};

/// Forward polygonal characteristic with a value per segment (<= 2 segments).
struct CharPath {
  int n = 0;           // number of vertices (2 or 3)
  double t[3] = {0, 0, 0};
  double x[3] = {0, 0, 0};
  double v[2] = {0, 0};  // value on segment [i, i+1]
  double position(double tau) const;
  double value(double tau) const;
};

/// One-parameter family of non-crossing forward characteristics; position at
/// fixed time is nondecreasing in the parameter.
struct CharFamily {
  double p0 = 0.0, p1 = 0.0;
  std::function<CharPath(double)> make;
};

/// Triangular constant region bounded by x = 0 and the line through
/// (0, anchor_t) with the given slope (interface emission wedges and trace
/// plateaus).
struct TriRegion {
  double anchor_t = 0.0;
  double slope = 0.0;
  double value = 0.0;
  bool contains(double x, double t) const;
};

struct SteeringDiagnostics {
  double max_alpha_residual = 0.0;  // crossing-compression root residuals
  double min_foot_gap = 0.0;        // fan non-crossing margin
  double u0_sup = 0.0;              // max |u0|
  double u0_bound = 0.0;            // the a-priori bound M on |u0|
};

struct SteeringPlan {
  AttainClass cls = AttainClass::none;
  TraceClass trace_tag = TraceClass::inadmissible;
  double T = 0.0;
  double L = 0.0, R = 0.0;
  Profile u0;
  InitialPartition partition;
  BackwardFan fan;
  SteeringDiagnostics diagnostics;
  std::vector<CharFamily> families;  // forward characteristic atlas
  std::vector<TriRegion> regions;
};

/// Backward polygonal fan through the time-T profile (requires membership).
BackwardFan build_fan(const Profile& omega, double T, const ValidatedFluxPair& pair,
                      const Connection& conn, const AttainabilityReport& report,
                      int per_piece = 64);

/// Partition of the initial line into rarefaction centres, compression
/// intervals, transported-wave intervals and special plateaus.
InitialPartition partition_initial_line(const BackwardFan& fan, const Profile& omega,
                                        double T, const ValidatedFluxPair& pair,
                                        const Connection& conn);

/// Slope alpha_n(x) of the refracted compression line through (x, 0) ending at
/// (y_n, T), for crossing compression intervals with y_n in (L, 0): root of
/// T - y_n / (f_l' o pi_{l,-}^r o (f_r')^{-1})(alpha) = -x / alpha.
double compression_slope(double x, double y_n, double alpha_plus, double alpha_minus,
                         const ValidatedFluxPair& pair, const Connection& conn, double T);

/// Constructs the steering initial datum with S_T^{AB} u0 = omega.
SteeringPlan steer(const Profile& omega, double T, const ValidatedFluxPair& pair,
                   const Connection& conn,
                   const std::optional<AttainabilityReport>& report = std::nullopt,
                   const ToleranceSet& tol = {});

/// Exact characteristic-based solution value at (x, t), t in [0, T].
double reconstruct_value(const SteeringPlan& plan, const Profile& omega, double x, double t);

/// Samples the exact constructed solution onto a grid at `frames` time levels.
Field reconstruct_field(const SteeringPlan& plan, const Profile& omega, double T,
                        const ValidatedFluxPair& pair, const Connection& conn,
                        const Grid& grid, int frames = 17);

}  // namespace abflux
