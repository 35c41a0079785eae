#include "tbp/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tbp/errors.hpp"

namespace tbp {

namespace {

using TraceEnd = TraceTermination;

struct TraceResult {
    LevelCurve curve;
    TraceEnd end = TraceEnd::Budget;
};

// Newton steps along the gradient toward the level set. Returns false when
// the residual is still above tol after max_iter updates.
bool newton_correct(const ScalarField& f, const GradientField& grad, double level, Vec2& q,
                    double tol, int max_iter, int& iters) {
    for (int i = 0; i <= max_iter; ++i) {
        const double r = f(q) - level;
        if (std::abs(r) <= tol) {
            iters = i;
            return true;
        }
        const Vec2 g = grad(q);
        const double g2 = g.squaredNorm();
        if (g2 < 1e-24) return false;
        q -= (r / g2) * g;
    }
    return false;
}

TraceResult trace_impl(const ScalarField& f, const GradientField& grad, double level,
                       const Vec2& seed, const TraceOptions& opt, const Box2* clip,
                       int orientation = +1) {
    Vec2 q0 = seed;
    int iters = 0;
    if (!newton_correct(f, grad, level, q0, opt.level_tol, 60, iters))
        throw SeedNotFoundError("could not project the seed onto the level set");

    TraceResult res;
    res.curve.vertices.push_back(q0);

    auto tangent = [&](const Vec2& q) -> Vec2 {
        const Vec2 g = grad(q);
        const double n = g.norm();
        return Vec2(g.y() / n, -g.x() / n);
    };

    double h = opt.step;
    Vec2 q = q0;
    Vec2 tau = orientation * tangent(q0);
    bool armed = false;

    for (long step = 0; step < opt.max_steps; ++step) {
        Vec2 t = tangent(q);
        if (t.dot(tau) < 0.0) t = -t;

        Vec2 qn;
        for (;;) {
            qn = q + h * t;
            if (newton_correct(f, grad, level, qn, opt.level_tol, opt.max_newton, iters) &&
                iters <= 5)
                break;
            h *= 0.5;  // sticky: curvature spikes stay resolved
            if (h < opt.step * 1e-6) {
                res.end = TraceEnd::CorrectorFailed;
                return res;
            }
        }
        tau = t;
        q = qn;

        if (clip && !clip->contains(q)) {
            res.curve.vertices.push_back(q);
            res.end = TraceEnd::Clipped;
            return res;
        }
        res.curve.vertices.push_back(q);

        const double dist_seed = (q - q0).norm();
        if (!armed && dist_seed > 3.0 * h) armed = true;
        if (armed && dist_seed < 2.0 * h) {
            res.curve.vertices.push_back(q0);
            res.curve.closed = true;
            res.end = TraceEnd::Closed;
            return res;
        }
    }
    return res;
}

double far_field_radius(double c) {
    double r = 2.5 + std::sqrt(std::max(0.0, -2.0 * c));
    return r;
}

// First crossing of V = c along a horizontal ray, scanning from x_start in
// direction dir (+-1) and bisecting the first sign change.
std::optional<double> axis_crossing(const System& sys, double c, double x_start, double dir,
                                    double x_limit, double scan_step = 1e-3) {
    auto s = [&](double x) { return effective_potential(sys, Vec2(x, 0.0)) - c; };
    double xa = x_start;
    double fa = s(xa);
    for (long k = 1;; ++k) {
        const double xb = x_start + dir * k * scan_step;
        if ((xb - x_limit) * dir > 0.0) return std::nullopt;
        const double fb = s(xb);
        if (fa == 0.0) return xa;
        if ((fa < 0.0) != (fb < 0.0)) {
            double lo = xa, hi = xb, flo = fa;
            for (int i = 0; i < 90; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double fm = s(mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        xa = xb;
        fa = fb;
    }
}

ScalarField potential_field(const System& sys) {
    return [sys](const Vec2& q) { return effective_potential(sys, q); };
}

GradientField potential_gradient(const System& sys) {
    return [sys](const Vec2& q) { return grad_V(sys, q); };
}

// Straight-segment connectivity probe: true when V <= c along the sampled
// segment from `from` to `to`. Sampling stops stop_dist short of `to` so the
// target may be a primary (where V -> -inf guarantees membership anyway).
bool segment_in_region(const System& sys, double c, const Vec2& from, const Vec2& to,
                       double stop_dist) {
    const double len = (to - from).norm();
    const long n = std::max<long>(32, static_cast<long>(len / 1e-3));
    for (long i = 1; i <= n; ++i) {
        const Vec2 p = from + (static_cast<double>(i) / n) * (to - from);
        if ((p - to).norm() < stop_dist) return true;
        if (effective_potential(sys, p) > c) return false;
    }
    return true;
}

HillTopology classify_unguarded(const CriticalEnergies& e, double c) {
    if (c >= e.h45) return HillTopology::AllPlane;
    if (c > e.heavy()) return HillTopology::TwoHoles;
    if (c > e.light()) return HillTopology::Horseshoe;
    if (c > e.h1) return HillTopology::BoundedPlusUnbounded;
    return HillTopology::ThreeComponents;
}

} // namespace

const char* to_string(HillTopology cls) {
    switch (cls) {
        case HillTopology::AllPlane: return "all-plane";
        case HillTopology::TwoHoles: return "two-holes";
        case HillTopology::Horseshoe: return "horseshoe";
        case HillTopology::BoundedPlusUnbounded: return "bounded-plus-unbounded";
        case HillTopology::ThreeComponents: return "three-components";
    }
    return "?";
}

const char* to_string(ComponentLabel label) {
    switch (label) {
        case ComponentLabel::Bounded: return "bounded";
        case ComponentLabel::Unbounded: return "unbounded";
        case ComponentLabel::Earth: return "earth";
        case ComponentLabel::Sun: return "sun";
    }
    return "?";
}

TopologyClass classify(MassRatio mu, double c) {
    if (mu.degenerate()) throw DegenerateMassError("classify requires 0 < mu < 1");
    const CriticalEnergies e = critical_energies(mu);
    for (double h : {e.h1, e.h2, e.h3, e.h45})
        if (std::abs(c - h) < 1e-9)
            throw NearCriticalEnergyError("energy within 1e-9 of a critical value");
    TopologyClass out;
    out.cls = classify_unguarded(e, c);
    switch (out.cls) {
        case HillTopology::BoundedPlusUnbounded: out.component_count = 2; break;
        case HillTopology::ThreeComponents: out.component_count = 3; break;
        default: out.component_count = 1; break;
    }
    return out;
}

Membership contains(MassRatio mu, double c, const Vec2& q) {
    const System sys = make_system(mu);
    if (effective_potential(sys, q) > c) return {false, std::nullopt};

    Membership m;
    m.inside = true;
    const double far_r = far_field_radius(c) + 1.0;
    auto radial_free = [&]() {
        const Vec2 target = q.norm() < 1e-9 ? Vec2(far_r, 0.0) : Vec2(q * (far_r / q.norm()));
        return segment_in_region(sys, c, q, target, 0.0);
    };

    if (mu.degenerate()) {
        if (c < rotating_kepler_critical_value() &&
            segment_in_region(sys, c, q, Vec2::Zero(), 1e-3))
            m.label = ComponentLabel::Bounded;
        else if (radial_free())
            m.label = ComponentLabel::Unbounded;
        return m;
    }

    const CriticalEnergies e = critical_energies(mu);
    switch (classify_unguarded(e, c)) {
        case HillTopology::AllPlane:
        case HillTopology::TwoHoles:
        case HillTopology::Horseshoe:
            m.label = ComponentLabel::Unbounded;
            break;
        case HillTopology::BoundedPlusUnbounded: {
            const Vec2 l1 = collinear_points(mu)[0].location;
            if (segment_in_region(sys, c, q, sys.earth, 1e-3) ||
                segment_in_region(sys, c, q, sys.sun, 1e-3) ||
                segment_in_region(sys, c, q, l1, 0.0))
                m.label = ComponentLabel::Bounded;
            else if (radial_free())
                m.label = ComponentLabel::Unbounded;
            break;
        }
        case HillTopology::ThreeComponents:
            if (segment_in_region(sys, c, q, sys.earth, 1e-3))
                m.label = ComponentLabel::Earth;
            else if (segment_in_region(sys, c, q, sys.sun, 1e-3))
                m.label = ComponentLabel::Sun;
            else if (radial_free())
                m.label = ComponentLabel::Unbounded;
            break;
    }
    return m;
}

LevelCurve trace_level_curve(const ScalarField& f, const GradientField& grad, double level,
                             const Vec2& seed, const TraceOptions& opt, const Box2* clip) {
    TraceResult res = trace_impl(f, grad, level, seed, opt, clip);
    if (res.end == TraceEnd::Budget && clip == nullptr)
        throw NoClosureError("level curve did not close within the step budget");
    if (res.end == TraceEnd::CorrectorFailed && clip == nullptr)
        throw NoClosureError("corrector failed; level may be too close to a critical value");
    return res.curve;
}

TraceOutcome trace_level_curve_directed(const ScalarField& f, const GradientField& grad,
                                        double level, const Vec2& seed, int orientation,
                                        const TraceOptions& opt, const Box2* clip) {
    TraceResult res = trace_impl(f, grad, level, seed, opt, clip, orientation >= 0 ? +1 : -1);
    return {std::move(res.curve), res.end};
}

OvalCurve trace_system_oval(const System& sys, double c, ComponentLabel which,
                            const TraceOptions& opt) {
    std::optional<double> seed_x;
    switch (sys.kind) {
        case SystemKind::PCR3BP: {
            const CriticalEnergies e = critical_energies(MassRatio(sys.mu));
            const double xe = sys.earth.x();
            const double xs = sys.sun.x();
            switch (which) {
                case ComponentLabel::Bounded:
                    if (!(c > e.h1 && c < e.light()))
                        throw SeedNotFoundError(
                            "no bounded peanut component at this energy (need h1 < c < "
                            "min(h2,h3))");
                    seed_x = axis_crossing(sys, c, xe + 1e-6, +1.0, xe + 3.0);
                    break;
                case ComponentLabel::Earth:
                    if (!(c < e.h1))
                        throw SeedNotFoundError("earth component requires c < h1");
                    seed_x = axis_crossing(sys, c, xe + 1e-6, +1.0, xe + 3.0);
                    break;
                case ComponentLabel::Sun:
                    if (!(c < e.h1)) throw SeedNotFoundError("sun component requires c < h1");
                    seed_x = axis_crossing(sys, c, xs - 1e-6, -1.0, xs - 3.0);
                    break;
                case ComponentLabel::Unbounded: {
                    if (!(c < e.heavy()))
                        throw SeedNotFoundError("no unbounded oval at this energy (need c < "
                                                "max(h2,h3))");
                    const double R = far_field_radius(c);
                    seed_x = axis_crossing(sys, c, R, -1.0, xe + 1e-3);
                    if (!seed_x) seed_x = axis_crossing(sys, c, -R, +1.0, xs - 1e-3);
                    break;
                }
            }
            break;
        }
        case SystemKind::RotatingKepler: {
            if (!(c < rotating_kepler_critical_value()))
                throw SeedNotFoundError("rotating-Kepler ovals require c < -1.5");
            if (which == ComponentLabel::Bounded)
                seed_x = axis_crossing(sys, c, 1e-6, +1.0, 1.5);
            else if (which == ComponentLabel::Unbounded)
                seed_x = axis_crossing(sys, c, far_field_radius(c), -1.0, 1e-3);
            else
                throw SeedNotFoundError("rotating-Kepler limit has bounded/unbounded components "
                                        "only");
            break;
        }
        case SystemKind::HillLunar: {
            if (which != ComponentLabel::Bounded)
                throw SeedNotFoundError("only the bounded Hill-lunar oval is closed; other "
                                        "components are not traceable");
            if (!(c < hill_critical_value()))
                throw SeedNotFoundError("bounded Hill-lunar component requires c < -3^(4/3)/2");
            seed_x = axis_crossing(sys, c, 1e-6, +1.0, std::pow(3.0, -1.0 / 3.0));
            break;
        }
    }
    if (!seed_x) throw SeedNotFoundError("no oval seed found on the scan ray");

    LevelCurve curve =
        trace_level_curve(potential_field(sys), potential_gradient(sys), c, Vec2(*seed_x, 0.0),
                          opt, nullptr);
    OvalCurve oval;
    oval.system = sys;
    oval.vertices = std::move(curve.vertices);
    oval.closed = curve.closed;
    oval.component_label = which;
    oval.energy = c;
    oval.mu = sys.mu;
    oval.trace_step = opt.step;
    oval.level_tol = opt.level_tol;
    return oval;
}

OvalCurve trace_oval(MassRatio mu, double c, ComponentLabel which, const TraceOptions& opt) {
    OvalCurve oval = trace_system_oval(make_system(mu), c, which, opt);
    oval.mu = mu.value();
    return oval;
}

Box2 bounded_region_bounds(MassRatio mu, double c, const TraceOptions& opt) {
    const OvalCurve oval = trace_oval(mu, c, ComponentLabel::Bounded, opt);
    Box2 box;
    box.setEmpty();
    for (const Vec2& v : oval.vertices) box.extend(v);
    return box;
}

double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& polyline) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        const Vec2& a = polyline[i];
        const Vec2 ab = polyline[i + 1] - a;
        const double len2 = ab.squaredNorm();
        double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (p - (a + t * ab)).norm());
    }
    return best;
}

int count_oval_components(MassRatio mu, double c, const TraceOptions& opt) {
    const System sys = make_system(mu);
    const double R = far_field_radius(c) + 1.0;

    std::vector<Vec2> seeds;
    auto scan_line = [&](const Vec2& origin, const Vec2& dir, double t0, double t1) {
        auto s = [&](double t) {
            const Vec2 p = origin + t * dir;
            if (min_singularity_distance(sys, p) < 1e-6) return -1.0;  // deep well, V << c
            return effective_potential(sys, p) - c;
        };
        const double step = 1e-3;
        double ta = t0;
        double fa = s(ta);
        for (double tb = t0 + step; tb <= t1; tb += step) {
            const double fb = s(tb);
            if ((fa < 0.0) != (fb < 0.0)) {
                double lo = ta, hi = tb, flo = fa;
                for (int i = 0; i < 60; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = s(mid);
                    if ((flo < 0.0) == (fm < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                seeds.push_back(origin + (0.5 * (lo + hi)) * dir);
            }
            ta = tb;
            fa = fb;
        }
    };

    scan_line(Vec2(0.0, 0.0), Vec2(1.0, 0.0), -R, R);
    if (sys.kind == SystemKind::PCR3BP)
        scan_line(Vec2(0.5 - sys.mu, 0.0), Vec2(0.0, 1.0), -R, R);

    std::vector<LevelCurve> curves;
    const double dedupe_tol = std::max(3.0 * opt.step, 2e-3);
    for (const Vec2& seed : seeds) {
        bool duplicate = false;
        for (const LevelCurve& curve : curves)
            if (point_polyline_distance(seed, curve.vertices) < dedupe_tol) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        curves.push_back(
            trace_level_curve(potential_field(sys), potential_gradient(sys), c, seed, opt));
    }
    return static_cast<int>(curves.size());
}

} // namespace tbp
