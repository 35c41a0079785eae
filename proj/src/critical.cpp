#include "tbp/critical.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "tbp/errors.hpp"

namespace tbp {

namespace {

constexpr double kBracketStep = 1e-3;
constexpr double kRootTol = 1e-12;

double u_prime(double mu, double x) {
    const double a = x - (1.0 - mu);
    const double b = x + mu;
    double d1 = 0.0;
    if (mu > 0.0) d1 += mu * a / std::pow(std::abs(a), 3);
    if (mu < 1.0) d1 += (1.0 - mu) * b / std::pow(std::abs(b), 3);
    return d1 - x;
}

// Bisection on u' over a sign-changing bracket. u is strictly concave, so u'
// is strictly decreasing and the root is unique.
double bisect_u_prime(double mu, double lo, double hi) {
    double flo = u_prime(mu, lo);
    double fhi = u_prime(mu, hi);
    if (flo * fhi > 0.0)
        throw BracketingError("collinear root bracket has no sign change (internal bug)");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fmid = u_prime(mu, mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(u_prime(mu, root)) > kRootTol)
        throw BracketingError("collinear root refinement stalled (internal bug)");
    return root;
}

// Walk outward from `start` in direction `dir` in multiples of the bracket
// step until u' changes sign against its first sampled value.
std::pair<double, double> bracket_from_singularity(double mu, double start, double dir,
                                                   double limit) {
    double prev = start + dir * kBracketStep;
    const bool first_sign = u_prime(mu, prev) > 0.0;
    for (int k = 2; k < 2000000; ++k) {
        const double x = start + dir * k * kBracketStep;
        if ((x - limit) * dir > 0.0) break;
        if ((u_prime(mu, x) > 0.0) != first_sign) return {std::min(prev, x), std::max(prev, x)};
        prev = x;
    }
    throw BracketingError("no sign change of u' found while stepping outward (internal bug)");
}

CriticalPoint make_axis_point(const System& sys, double x, CriticalLabel label) {
    CriticalPoint p;
    p.location = Vec2(x, 0.0);
    p.value = effective_potential(sys, p.location);
    p.morse_index = morse_index(sys, p.location);
    p.label = label;
    return p;
}

} // namespace

const char* to_string(CriticalLabel label) {
    switch (label) {
        case CriticalLabel::L1: return "L1";
        case CriticalLabel::L2: return "L2";
        case CriticalLabel::L3: return "L3";
        case CriticalLabel::L4: return "L4";
        case CriticalLabel::L5: return "L5";
        case CriticalLabel::HillPlus: return "HillPlus";
        case CriticalLabel::HillMinus: return "HillMinus";
    }
    return "?";
}

RestrictedPotential restricted_potential(MassRatio mu, double x) {
    const double m = mu.value();
    const double a = x - (1.0 - m);  // offset from earth
    const double b = x + m;          // offset from sun
    if ((m > 0.0 && std::abs(a) <= kSingularityGuard) ||
        (m < 1.0 && std::abs(b) <= kSingularityGuard))
        throw SingularityError("restricted potential evaluated at a primary");
    RestrictedPotential r;
    r.value = -x * x / 2.0;
    r.d1 = -x;
    r.d2 = -1.0;
    if (m > 0.0) {
        const double aa = std::abs(a);
        r.value -= m / aa;
        r.d1 += m * a / (aa * aa * aa);
        r.d2 -= 2.0 * m / (aa * aa * aa);
    }
    if (m < 1.0) {
        const double ab = std::abs(b);
        r.value -= (1.0 - m) / ab;
        r.d1 += (1.0 - m) * b / (ab * ab * ab);
        r.d2 -= 2.0 * (1.0 - m) / (ab * ab * ab);
    }
    return r;
}

std::pair<CriticalPoint, CriticalPoint> triangular_points(MassRatio mu) {
    if (mu.degenerate())
        throw DegenerateMassError("triangular points require 0 < mu < 1");
    const double m = mu.value();
    const System sys = pcr3bp(mu);
    CriticalPoint l4;
    l4.location = Vec2(0.5 - m, std::sqrt(3.0) / 2.0);
    l4.value = (m * (1.0 - m) - 3.0) / 2.0;
    l4.morse_index = morse_index(sys, l4.location);
    l4.label = CriticalLabel::L4;
    CriticalPoint l5 = l4;
    l5.location.y() = -l5.location.y();
    l5.label = CriticalLabel::L5;
    return {l4, l5};
}

std::array<CriticalPoint, 3> collinear_points(MassRatio mu) {
    if (mu.degenerate())
        throw DegenerateMassError("collinear points require 0 < mu < 1");
    const double m = mu.value();
    const System sys = pcr3bp(mu);
    const double xe = 1.0 - m;
    const double xs = -m;

    // L1 between the primaries, L2 beyond earth, L3 beyond the sun.
    auto [a1, b1] = bracket_from_singularity(m, xs, +1.0, xe);
    const double x1 = bisect_u_prime(m, a1, b1);
    auto [a2, b2] = bracket_from_singularity(m, xe, +1.0, xe + 3.0);
    const double x2 = bisect_u_prime(m, a2, b2);
    auto [a3, b3] = bracket_from_singularity(m, xs, -1.0, xs - 3.0);
    const double x3 = bisect_u_prime(m, a3, b3);

    return {make_axis_point(sys, x1, CriticalLabel::L1),
            make_axis_point(sys, x2, CriticalLabel::L2),
            make_axis_point(sys, x3, CriticalLabel::L3)};
}

CriticalEnergies critical_energies(MassRatio mu) {
    const auto col = collinear_points(mu);
    CriticalEnergies e;
    e.h1 = col[0].value;
    e.h2 = col[1].value;
    e.h3 = col[2].value;
    e.h45 = (mu.value() * (1.0 - mu.value()) - 3.0) / 2.0;
    return e;
}

std::vector<CriticalPoint> lagrange_points(MassRatio mu) {
    const auto col = collinear_points(mu);
    const auto [l4, l5] = triangular_points(mu);
    return {col[0], col[1], col[2], l4, l5};
}

std::pair<CriticalPoint, CriticalPoint> hill_critical_points() {
    const System sys = hill_lunar();
    const double x = std::pow(3.0, -1.0 / 3.0);
    CriticalPoint plus;
    plus.location = Vec2(x, 0.0);
    plus.value = hill_critical_value();
    plus.morse_index = morse_index(sys, plus.location);
    plus.label = CriticalLabel::HillPlus;
    CriticalPoint minus = plus;
    minus.location.x() = -x;
    minus.label = CriticalLabel::HillMinus;
    return {plus, minus};
}

double hill_critical_value() { return -std::pow(3.0, 4.0 / 3.0) / 2.0; }

double rotating_kepler_critical_value() {
    return effective_potential(rotating_kepler(), Vec2(1.0, 0.0));
}

int morse_index(const System& sys, const Vec2& location) {
    Eigen::SelfAdjointEigenSolver<Mat2> solver(hess_V(sys, location));
    int count = 0;
    for (int i = 0; i < 2; ++i)
        if (solver.eigenvalues()[i] < -1e-9) ++count;
    return count;
}

} // namespace tbp
