#include "doctest.h"

#include <cmath>

#include "abflux/riemann.hpp"
#include "common/helpers.hpp"

using namespace abflux;
using namespace abflux::testing;

TEST_CASE("classical Godunov flux") {
  const ScalarFlux f = ScalarFlux::polynomial({0.0, 0.0, 0.5});
  CHECK(godunov_flux_classical(f, 0.0, -1.0, 1.0) == doctest::Approx(0.0));   // transonic fan
  CHECK(godunov_flux_classical(f, 0.0, 1.0, -1.0) == doctest::Approx(0.5));   // standing shock
  CHECK(godunov_flux_classical(f, 0.0, 2.0, 1.0) == doctest::Approx(2.0));    // upwind left
}

TEST_CASE("interface flux examples") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  CHECK(interface_flux_AB(pair, conn, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(interface_flux_AB(pair, conn, -1.0, 1.0) == doctest::Approx(0.125));
}

TEST_CASE("critical connection with identical fluxes reduces to classical Godunov") {
  const auto pair = burgers_pair();
  const auto conn = connection_from_level(pair, critical_level(pair));
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      const double a = -2.0 + 4.0 * i / 40;
      const double b = -2.0 + 4.0 * j / 40;
      const double fab = interface_flux_AB(pair, conn, a, b);
      const double fg = godunov_flux_classical(pair, Side::left, a, b);
      CHECK(std::abs(fab - fg) <= 1e-14);
    }
}

TEST_CASE("interface traces") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  SUBCASE("connection-dominated data") {
    const auto tp = interface_traces(pair, conn, -1.0, 1.0);
    CHECK(tp.u_l == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(tp.u_r == doctest::Approx(kB).epsilon(1e-10));
    CHECK(tp.flux == doctest::Approx(0.125));
  }
  SUBCASE("left-upwind data") {
    const auto tp = interface_traces(pair, conn, 1.0, 0.0);
    CHECK(tp.u_l == doctest::Approx(1.0));
    CHECK(tp.u_r == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tp.flux == doctest::Approx(0.5));
  }
  SUBCASE("connection datum is a fixed point") {
    const auto tp = interface_traces(pair, conn, conn.A, conn.B);
    CHECK(tp.u_l == doctest::Approx(conn.A).epsilon(1e-12));
    CHECK(tp.u_r == doctest::Approx(conn.B).epsilon(1e-12));
    CHECK(tp.flux == doctest::Approx(conn.gamma));
  }
}

TEST_CASE("trace pair classification") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  SUBCASE("T1") {
    const auto c = classify_trace_pair(pair, conn, TracePair{1.0, 1.0, 0.5});
    CHECK(c.tag == TraceClass::T1);
  }
  SUBCASE("AB exact") {
    const auto c = classify_trace_pair(pair, conn, TracePair{conn.A, conn.B, conn.gamma});
    CHECK(c.tag == TraceClass::AB);
  }
  SUBCASE("inadmissible pair") {
    const auto c = classify_trace_pair(pair, conn, TracePair{0.2, -0.5, 0.0});
    CHECK(c.tag == TraceClass::inadmissible);
  }
  SUBCASE("T2") {
    const auto c = classify_trace_pair(pair, conn, TracePair{-1.0, -0.5, 0.5});
    CHECK(c.tag == TraceClass::T2);
  }
  SUBCASE("boundary equality stays in the closed set as written") {
    // u_l = theta_l exactly: excluded from T1 (open), present in T3- when the
    // remaining inequalities hold
    const auto critical = connection_from_level(pair, critical_level(pair));
    const double ur = pi_map(pair, PiKind::r_minus, critical.B);
    const auto c = classify_trace_pair(pair, critical, TracePair{pair.theta_l, ur, 0.0});
    CHECK(c.tag == TraceClass::T3minus);
  }
}

TEST_CASE("oracle agrees with the closed-form traces on a coarse lattice") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  const auto iv = invariant_interval(pair, conn, -2.0, 2.0);
  const auto grid = make_state_grid(iv.lo - 0.25, iv.hi + 0.25, 801);
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      const double a = -2.0 + 4.0 * i / 8;
      const double b = -2.0 + 4.0 * j / 8;
      const auto tp = interface_traces(pair, conn, a, b);
      const auto oc = riemann_oracle(pair, conn, a, b, grid);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(tp.u_l - oc.u_l) <= 5e-3);
      CHECK(std::abs(tp.u_r - oc.u_r) <= 5e-3);
      CHECK(std::abs(tp.flux - oc.flux) <= 1e-6);
    }
}

TEST_CASE("oracle fixed points and reductions") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  const auto grid = make_state_grid(-4.0, 3.0, 1401);
  SUBCASE("connection datum") {
    const auto oc = riemann_oracle(pair, conn, conn.A, conn.B, grid);
    CHECK(oc.u_l == doctest::Approx(conn.A).epsilon(1e-9));
    CHECK(oc.u_r == doctest::Approx(conn.B).epsilon(1e-9));
  }
  SUBCASE("identical fluxes, critical connection: classical traces") {
    const auto bp = burgers_pair();
    const auto bc = connection_from_level(bp, critical_level(bp));
    const auto oc = riemann_oracle(bp, bc, -1.0, 1.0, grid);
    CHECK(std::abs(oc.u_l) <= 1e-9);  // transonic fan passes through theta = 0
    CHECK(std::abs(oc.u_r) <= 1e-9);
  }
}

TEST_CASE("interface flux invariants") {
  const auto pair = quadratic_pair();
  const auto conn = conn_eighth(pair);
  SUBCASE("traces on a lattice are admissible and classified") {
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        const double a = -2.0 + 4.0 * i / 20;
        const double b = -2.0 + 4.0 * j / 20;
        const auto tp = interface_traces(pair, conn, a, b);
        CHECK(std::abs(pair.f(Side::left, tp.u_l) - pair.f(Side::right, tp.u_r)) <= 1e-10);
        CHECK(tp.flux >= conn.gamma - 1e-10);
        const auto c = classify_trace_pair(pair, conn, tp);
        CHECK(c.tag != TraceClass::inadmissible);
        // second line of the interface entropy condition
        if (tp.u_l <= pair.theta_l && tp.u_r >= pair.theta_r) {
          CHECK(tp.u_l == doctest::Approx(conn.A).epsilon(1e-9));
          CHECK(tp.u_r == doctest::Approx(conn.B).epsilon(1e-9));
        }
      }
  }
  SUBCASE("flux invariant under capacity-preserving replacement of a") {
    for (double b : {-1.0, 0.2, 1.5}) {
      const double f1 = interface_flux_AB(pair, conn, -0.7, b);
      const double f2 = interface_flux_AB(pair, conn, pair.theta_l, b);
      const double f3 = interface_flux_AB(pair, conn, -2.0, b);
      CHECK(f1 == doctest::Approx(f2));  // all left capacities equal f_l(theta_l)
      CHECK(f1 == doctest::Approx(f3));
    }
  }
  SUBCASE("consistency with a single flux") {
    const auto bp = burgers_pair();
    const auto bc = connection_from_level(bp, critical_level(bp));
    for (double u = -2.0; u <= 2.0; u += 0.25)
      if (bp.f(Side::left, u) >= bp.min_flux(Side::left))
        CHECK(interface_flux_AB(bp, bc, u, u) == doctest::Approx(bp.f(Side::left, u)));
  }
}
