#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "tbp/critical.hpp"
#include "tbp/errors.hpp"
#include "tbp/systems.hpp"

using namespace tbp;

namespace {
const Vec2 kL4_03(0.2, std::sqrt(3.0) / 2.0);  // triangular point for mu = 0.3
}

TEST_CASE("mass ratio validation") {
    CHECK_THROWS_AS(MassRatio(-0.1), DegenerateMassError);
    CHECK_THROWS_AS(MassRatio(1.5), DegenerateMassError);
    CHECK(MassRatio(0.0).degenerate());
    CHECK(MassRatio(1.0).degenerate());
    CHECK_FALSE(MassRatio(0.3).degenerate());
    CHECK(make_system(MassRatio(0.0)).kind == SystemKind::RotatingKepler);
    CHECK(make_system(MassRatio(1.0)).kind == SystemKind::RotatingKepler);
    CHECK(make_system(MassRatio(0.25)).kind == SystemKind::PCR3BP);
}

TEST_CASE("effective potential reference values") {
    const System s03 = pcr3bp(MassRatio(0.3));
    CHECK(effective_potential(s03, kL4_03) == doctest::Approx(-1.395).epsilon(1e-13));

    const System s05 = pcr3bp(MassRatio(0.5));
    CHECK(effective_potential(s05, Vec2(0.0, 0.0)) == doctest::Approx(-2.0).epsilon(1e-14));

    const System hill = hill_lunar();
    const double x = std::pow(3.0, -1.0 / 3.0);
    CHECK(effective_potential(hill, Vec2(x, 0.0)) ==
          doctest::Approx(-2.1633743554611126).epsilon(1e-13));
}

TEST_CASE("potential evaluation at a primary raises") {
    const System sys = pcr3bp(MassRatio(0.3));
    CHECK_THROWS_AS(effective_potential(sys, sys.earth), SingularityError);
    CHECK_THROWS_AS(grad_V(sys, sys.sun), SingularityError);
    CHECK_THROWS_AS(effective_potential(hill_lunar(), Vec2(0.0, 0.0)), SingularityError);
}

TEST_CASE("alternative potential values and identity") {
    const System s05 = pcr3bp(MassRatio(0.5));
    CHECK(alt_potential(s05, Vec2(0.0, 0.0)) == doctest::Approx(2.125).epsilon(1e-14));

    const System s03 = pcr3bp(MassRatio(0.3));
    CHECK(alt_potential(s03, kL4_03) == doctest::Approx(1.5).epsilon(1e-13));

    const System s02 = pcr3bp(MassRatio(0.2));
    const Vec2 q(0.4, 0.3);
    CHECK(alt_potential(s02, q) ==
          doctest::Approx(-effective_potential(s02, q) + 0.08).epsilon(1e-12));

    // Omega + V = mu(1-mu)/2 on random samples
    for (int i = 0; i < 100; ++i) {
        const double mu = oracle::uniform(0.05, 0.95);
        const System sys = pcr3bp(MassRatio(mu));
        const Vec2 p = oracle::random_point(mu);
        CHECK(std::abs(alt_potential(sys, p) + effective_potential(sys, p) -
                       mu * (1.0 - mu) / 2.0) < 1e-12);
    }

    CHECK_THROWS_AS(alt_potential(hill_lunar(), Vec2(1.0, 1.0)), UnsupportedSystemError);
    CHECK_THROWS_AS(alt_potential(rotating_kepler(), Vec2(1.0, 1.0)), UnsupportedSystemError);
}

TEST_CASE("gradient vanishes at the triangular point and on-axis by symmetry") {
    const System s03 = pcr3bp(MassRatio(0.3));
    CHECK(grad_V(s03, kL4_03).norm() < 1e-12);

    for (double mu : {0.1, 0.33, 0.62}) {
        const System sys = pcr3bp(MassRatio(mu));
        CHECK(grad_V(sys, Vec2(0.3, 0.0)).y() == 0.0);
    }
}

TEST_CASE("gradient and Hessian match finite differences") {
    for (int i = 0; i < 25; ++i) {
        const double mu = oracle::uniform(0.05, 0.95);
        const System sys = pcr3bp(MassRatio(mu));
        const Vec2 q = oracle::random_point(mu);

        const Vec2 g = grad_V(sys, q);
        const Vec2 g_fd = oracle::fd_grad(
            [&](const Vec2& p) { return effective_potential(sys, p); }, q);
        CHECK((g - g_fd).norm() / std::max(1.0, g.norm()) < 1e-6);

        const Mat2 h = hess_V(sys, q);
        const Mat2 h_fd =
            oracle::fd_jacobian([&](const Vec2& p) { return grad_V(sys, p); }, q);
        CHECK((h - h_fd).norm() / std::max(1.0, h.norm()) < 1e-6);
    }
    // same for the one-primary systems
    for (const System& sys : {rotating_kepler(), hill_lunar()}) {
        for (int i = 0; i < 10; ++i) {
            const Vec2 q = oracle::random_point(0.5, 0.2);
            const Vec2 g_fd = oracle::fd_grad(
                [&](const Vec2& p) { return effective_potential(sys, p); }, q);
            CHECK((grad_V(sys, q) - g_fd).norm() < 1e-6);
            const Mat2 h_fd =
                oracle::fd_jacobian([&](const Vec2& p) { return grad_V(sys, p); }, q);
            CHECK((hess_V(sys, q) - h_fd).norm() / std::max(1.0, hess_V(sys, q).norm()) < 1e-6);
        }
    }
}

TEST_CASE("reflection symmetries of the potential") {
    for (int i = 0; i < 50; ++i) {
        const double mu = oracle::uniform(0.05, 0.95);
        const System sys = pcr3bp(MassRatio(mu));
        const Vec2 q = oracle::random_point(mu);
        CHECK(effective_potential(sys, q) ==
              doctest::Approx(effective_potential(sys, Vec2(q.x(), -q.y()))).epsilon(1e-15));
    }
    // extra q1-reflection at mu = 1/2 and for Hill's problem
    const System s05 = pcr3bp(MassRatio(0.5));
    const System hill = hill_lunar();
    for (int i = 0; i < 50; ++i) {
        const Vec2 q = oracle::random_point(0.5);
        const Vec2 m(-q.x(), q.y());
        CHECK(effective_potential(s05, q) ==
              doctest::Approx(effective_potential(s05, m)).epsilon(1e-15));
        CHECK(effective_potential(hill, q) ==
              doctest::Approx(effective_potential(hill, m)).epsilon(1e-15));
    }
}

TEST_CASE("hamiltonian in velocity and momentum form") {
    const System s03 = pcr3bp(MassRatio(0.3));
    CHECK(hamiltonian(s03, PhaseState{kL4_03, Vec2::Zero()}) ==
          doctest::Approx(-1.395).epsilon(1e-13));

    const System s05 = pcr3bp(MassRatio(0.5));
    CHECK(hamiltonian(s05, PhaseState{Vec2::Zero(), Vec2::Zero()}) ==
          doctest::Approx(-2.0).epsilon(1e-14));

    const System s02 = pcr3bp(MassRatio(0.2));
    const PhaseState st{{0.5, 0.5}, {0.1, -0.2}};
    CHECK(hamiltonian(s02, st) ==
          doctest::Approx(effective_potential(s02, st.q) + 0.025).epsilon(1e-14));
    CHECK(hamiltonian(s02, st) ==
          doctest::Approx(hamiltonian_pq(s02, st.q, momenta(st))).epsilon(1e-14));

    // momentum conversion round-trips to rounding
    for (int i = 0; i < 20; ++i) {
        const PhaseState s{{oracle::uniform(-2, 2), oracle::uniform(-2, 2)},
                           {oracle::uniform(-2, 2), oracle::uniform(-2, 2)}};
        const PhaseState back = state_from_momenta(s.q, Vec2(momenta(s)));
        CHECK((back.q - s.q).norm() == 0.0);
        CHECK((back.v - s.v).norm() < 1e-15 * (1.0 + s.v.norm()));
    }
}

TEST_CASE("equations of motion vanish at equilibria") {
    const auto col = collinear_points(MassRatio(0.3));
    const PhaseState rest{col[0].location, Vec2::Zero()};
    const System s03 = pcr3bp(MassRatio(0.3));
    const auto d = eom(s03, rest);
    CHECK(d.q.norm() == 0.0);
    CHECK(d.v.norm() < 1e-12);

    const auto dk = eom(rotating_kepler(), PhaseState{{1.0, 0.0}, {0.0, 0.0}});
    CHECK(dk.q.norm() == 0.0);
    CHECK(dk.v.norm() < 1e-14);

    const auto dh = eom(hill_lunar(), PhaseState{{std::pow(3.0, -1.0 / 3.0), 0.0}, {0.0, 0.0}});
    CHECK(dh.q.norm() == 0.0);
    CHECK(dh.v.norm() < 1e-12);
}

TEST_CASE("energy is a first integral of the vector field") {
    for (int i = 0; i < 50; ++i) {
        const double mu = oracle::uniform(0.05, 0.95);
        const System sys = pcr3bp(MassRatio(mu));
        const PhaseState s{oracle::random_point(mu),
                           {oracle::uniform(-1, 1), oracle::uniform(-1, 1)}};
        const auto d = eom(sys, s);
        const double dot = grad_V(sys, s.q).dot(d.q) + s.v.dot(d.v);
        CHECK(std::abs(dot) < 1e-12);
    }
}
