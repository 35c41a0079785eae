#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "tbp/critical.hpp"
#include "tbp/errors.hpp"

using namespace tbp;

TEST_CASE("triangular points") {
    const auto [l4, l5] = triangular_points(MassRatio(0.5));
    CHECK(l4.location.x() == 0.0);
    CHECK(l4.location.y() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(l4.value == doctest::Approx(-1.375).epsilon(1e-14));
    CHECK(l4.morse_index == 2);

    const auto [m4, m5] = triangular_points(MassRatio(0.2));
    CHECK(m4.location.x() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(m4.value == doctest::Approx((0.16 - 3.0) / 2.0).epsilon(1e-14));

    // l5 is always the q2-mirror of l4
    for (double mu : {0.1, 0.37, 0.9}) {
        const auto [a, b] = triangular_points(MassRatio(mu));
        CHECK(a.location.x() == b.location.x());
        CHECK(a.location.y() == -b.location.y());
        CHECK(a.value == b.value);
        CHECK(b.morse_index == 2);
    }

    CHECK_THROWS_AS(triangular_points(MassRatio(0.0)), DegenerateMassError);
    CHECK_THROWS_AS(triangular_points(MassRatio(1.0)), DegenerateMassError);
}

TEST_CASE("restricted potential") {
    CHECK(restricted_potential(MassRatio(0.5), 0.0).value == doctest::Approx(-2.0));

    // strict concavity
    for (int i = 0; i < 60; ++i) {
        const double mu = 0.3;
        const double x = oracle::uniform(-2.5, 2.5);
        if (std::abs(x - 0.7) < 1e-2 || std::abs(x + 0.3) < 1e-2) continue;
        CHECK(restricted_potential(MassRatio(mu), x).d2 < 0.0);
    }

    // derivatives against finite differences of the value
    const MassRatio mu(0.2);
    auto u = [&](double x) { return restricted_potential(mu, x).value; };
    auto du = [&](double x) { return restricted_potential(mu, x).d1; };
    CHECK(restricted_potential(mu, 0.4).d1 == doctest::Approx(oracle::fd1(u, 0.4)).epsilon(1e-6));
    CHECK(restricted_potential(mu, 0.4).d2 ==
          doctest::Approx(oracle::fd1(du, 0.4)).epsilon(1e-8));

    CHECK_THROWS_AS(restricted_potential(mu, 0.8), SingularityError);
    CHECK_THROWS_AS(restricted_potential(mu, -0.2), SingularityError);
}

TEST_CASE("collinear points at mu = 1/2") {
    const auto col = collinear_points(MassRatio(0.5));
    CHECK(std::abs(col[0].location.x()) < 1e-12);  // L1 at the origin
    CHECK(col[0].location.y() == 0.0);

    // frozen from a high-precision bisection of u' (30-digit arithmetic)
    CHECK(col[1].location.x() == doctest::Approx(1.19840614455492).epsilon(1e-10));
    CHECK(col[1].location.x() == doctest::Approx(-col[2].location.x()).epsilon(1e-12));

    for (const auto& p : col) {
        CHECK(p.morse_index == 1);
        CHECK(std::abs(restricted_potential(MassRatio(0.5), p.location.x()).d1) < 1e-12);
    }

    // independent oracle: bisection on a centered difference of the
    // hand-written axis potential over (0.51, 3)
    const double l2_oracle = oracle::bisect(
        [](double x) { return oracle::fd1([](double t) { return oracle::u_axis(0.5, t); }, x); },
        0.51, 3.0);
    CHECK(col[1].location.x() == doctest::Approx(l2_oracle).epsilon(1e-6));

    CHECK_THROWS_AS(collinear_points(MassRatio(1.0)), DegenerateMassError);
}

TEST_CASE("critical energies") {
    const CriticalEnergies e05 = critical_energies(MassRatio(0.5));
    CHECK(e05.h1 == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(e05.h2 == doctest::Approx(e05.h3).epsilon(1e-13));
    CHECK(e05.h2 == doctest::Approx(-1.7283981120430765).epsilon(1e-10));
    CHECK(e05.h45 == doctest::Approx(-1.375).epsilon(1e-14));

    // frozen reference energies for mu = 0.2
    const CriticalEnergies e02 = critical_energies(MassRatio(0.2));
    CHECK(e02.h1 == doctest::Approx(-1.9023266381531849).epsilon(1e-10));
    CHECK(e02.h2 == doctest::Approx(-1.7761966664255881).epsilon(1e-10));
    CHECK(e02.h3 == doctest::Approx(-1.59866021050299).epsilon(1e-10));
    CHECK(e02.h45 == doctest::Approx(-1.42).epsilon(1e-14));
    CHECK(e02.h1 < e02.h2);
    CHECK(e02.h2 < e02.h3);
    CHECK(e02.h3 < e02.h45);
    CHECK(e02.light() == e02.h2);
    CHECK(e02.heavy() == e02.h3);
}

TEST_CASE("Lagrange point suite over a mass-ratio grid") {
    for (int i = 1; i <= 9; ++i) {
        const double mu = i / 10.0;
        const System sys = pcr3bp(MassRatio(mu));
        const auto points = lagrange_points(MassRatio(mu));
        REQUIRE(points.size() == 5);
        const int expected_index[5] = {1, 1, 1, 2, 2};
        for (int k = 0; k < 5; ++k) {
            CHECK(grad_V(sys, points[k].location).norm() < 1e-10);
            CHECK(points[k].morse_index == expected_index[k]);
        }
        // L1/L2/L3 sit in their intervals with q2 = 0 exactly
        CHECK(points[0].location.y() == 0.0);
        CHECK(points[0].location.x() > -mu);
        CHECK(points[0].location.x() < 1.0 - mu);
        CHECK(points[1].location.x() > 1.0 - mu);
        CHECK(points[2].location.x() < -mu);

        const CriticalEnergies e = critical_energies(MassRatio(mu));
        CHECK(e.h1 < e.h2);
        CHECK(e.h1 < e.h3);
        CHECK(e.h2 < e.h45);
        CHECK(e.h3 < e.h45);
        if (mu < 0.5) CHECK(e.h2 < e.h3);
        if (mu > 0.5) CHECK(e.h3 < e.h2);
    }
}

TEST_CASE("Hill lunar critical points") {
    const auto [plus, minus] = hill_critical_points();
    CHECK(plus.location.x() == doctest::Approx(0.6933612743506347).epsilon(1e-13));
    CHECK(plus.location.y() == 0.0);
    CHECK(minus.location.x() == doctest::Approx(-0.6933612743506347).epsilon(1e-13));
    CHECK(plus.value == doctest::Approx(-2.1633743554611126).epsilon(1e-13));
    CHECK(minus.value == plus.value);
    CHECK(grad_V(hill_lunar(), plus.location).norm() < 1e-12);
    CHECK(grad_V(hill_lunar(), minus.location).norm() < 1e-12);
    CHECK(plus.morse_index == 1);
}

TEST_CASE("transformed potential has Hessian diag(3(1-mu), 3mu) at (1,1)") {
    for (double mu : {0.2, 0.5, 0.7}) {
        const System sys = pcr3bp(MassRatio(mu));
        // U = Omega composed with the inverse distance map on the upper
        // half plane: sigma = |q - s|, rho = |q - e|
        auto U = [&](double sigma, double rho) {
            const double q1 = (sigma * sigma - rho * rho + 1.0 - 2.0 * mu) / 2.0;
            const double q2 = std::sqrt(sigma * sigma - (q1 + mu) * (q1 + mu));
            return alt_potential(sys, Vec2(q1, q2));
        };
        const double h = 1e-4;
        const double uxx = (U(1 + h, 1) - 2 * U(1, 1) + U(1 - h, 1)) / (h * h);
        const double uyy = (U(1, 1 + h) - 2 * U(1, 1) + U(1, 1 - h)) / (h * h);
        const double uxy =
            (U(1 + h, 1 + h) - U(1 + h, 1 - h) - U(1 - h, 1 + h) + U(1 - h, 1 - h)) /
            (4 * h * h);
        CHECK(uxx == doctest::Approx(3.0 * (1.0 - mu)).epsilon(1e-5));
        CHECK(uyy == doctest::Approx(3.0 * mu).epsilon(1e-5));
        CHECK(std::abs(uxy) < 1e-5);
    }
}

TEST_CASE("axis potential is smaller between the primaries than mirrored beyond earth") {
    for (double mu : {0.2, 0.5, 0.8}) {
        for (int i = 0; i < 100; ++i) {
            const double x = oracle::uniform(-mu + 1e-3, 1.0 - mu - 1e-3);
            const double rho = (1.0 - mu) - x;
            const double xp = (1.0 - mu) + rho;
            const double diff = restricted_potential(MassRatio(mu), x).value -
                                restricted_potential(MassRatio(mu), xp).value;
            CHECK(diff < 0.0);
            // closed form of the difference
            CHECK(diff == doctest::Approx(-2.0 * (1.0 - mu) * rho * rho * rho /
                                          (1.0 - rho * rho))
                              .epsilon(1e-10));
        }
    }
}
