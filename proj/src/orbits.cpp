#include "tbp/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "tbp/critical.hpp"
#include "tbp/errors.hpp"

namespace tbp {

namespace {

// Dormand–Prince 5(4) tableau with the order-4 continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// 10-point Gauss–Legendre rule on [0,1].
constexpr int kQuadPoints = 10;
constexpr double kQuadX[kQuadPoints] = {
    0.5 - 0.97390652851717172 / 2, 0.5 - 0.86506336668898451 / 2,
    0.5 - 0.67940956829902441 / 2, 0.5 - 0.43339539412924719 / 2,
    0.5 - 0.14887433898163121 / 2, 0.5 + 0.14887433898163121 / 2,
    0.5 + 0.43339539412924719 / 2, 0.5 + 0.67940956829902441 / 2,
    0.5 + 0.86506336668898451 / 2, 0.5 + 0.97390652851717172 / 2};
constexpr double kQuadW[kQuadPoints] = {
    0.06667134430868814 / 2, 0.14945134915058059 / 2, 0.21908636251598204 / 2,
    0.26926671930999635 / 2, 0.29552422471475287 / 2, 0.29552422471475287 / 2,
    0.26926671930999635 / 2, 0.21908636251598204 / 2, 0.14945134915058059 / 2,
    0.06667134430868814 / 2};

Vec4 dense_eval(const Trajectory::Step& s, double theta) {
    const double t1 = 1.0 - theta;
    return s.cont[0] +
           theta * (s.cont[1] + t1 * (s.cont[2] + theta * (s.cont[3] + t1 * s.cont[4])));
}

struct Rhs {
    const System& sys;
    double guard;
    Vec4 operator()(const Vec4& y) const {
        const Vec2 q(y[0], y[1]);
        if (min_singularity_distance(sys, q) < guard)
            throw SingularityApproachError("trajectory entered the singularity guard radius");
        return eom_packed(sys, y);
    }
};

double error_norm(const Vec4& err, const Vec4& y0, const Vec4& y1, double tol) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sk;
        sum += r * r;
    }
    return std::sqrt(sum / 4.0);
}

double initial_step(const Rhs& f, const Vec4& y0, double tol, double t_end, double max_step) {
    const Vec4 f0 = f(y0);
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = tol + tol * std::abs(y0[i]);
        d0 = std::max(d0, std::abs(y0[i]) / sk);
        d1 = std::max(d1, std::abs(f0[i]) / sk);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, 0.1 * t_end, max_step});
    // one Euler probe to estimate the second derivative scale
    const Vec4 f1 = f(Vec4(y0 + h * f0));
    double d2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sk = tol + tol * std::abs(y0[i]);
        d2 = std::max(d2, std::abs(f1[i] - f0[i]) / sk);
    }
    d2 /= h;
    const double dm = std::max(d1, d2);
    const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h * 1e3);
    return std::min({100.0 * h, h1, t_end, max_step});
}

} // namespace

Vec4 Trajectory::state_at(double t) const {
    if (steps_.empty()) return final_state_;
    if (t >= end_time_) return final_state_;
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double value, const Step& s) { return value < s.t; });
    const Step& s = it == steps_.begin() ? steps_.front() : *(it - 1);
    const double theta = std::clamp((t - s.t) / s.h, 0.0, 1.0);
    return dense_eval(s, theta);
}

bool Trajectory::stationary(double tol) const {
    if (steps_.empty()) return true;
    const Vec4 y0 = steps_.front().cont[0];
    for (const Step& s : steps_)
        if (((s.cont[0] + s.cont[1]) - y0).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

Trajectory integrate(const System& sys, const PhaseState& initial, double t_end,
                     const IntegrateOptions& opt) {
    if (!(t_end > 0.0)) throw Error("integration horizon must be positive");
    if (!(opt.tolerance > 0.0)) throw Error("integrator tolerance must be positive");

    const Rhs f{sys, opt.singularity_guard};
    Trajectory traj;
    traj.system_ = sys;
    traj.initial_energy_ = hamiltonian(sys, initial);

    Vec4 y = pack_state(initial);
    double t = 0.0;
    Vec4 k1 = f(y);
    double h = initial_step(f, y, opt.tolerance, t_end, opt.max_step);
    bool rejected = false;

    for (long n = 0; n < opt.max_steps; ++n) {
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepUnderflowError("adaptive step size underflow");
        const bool last = t + 1.0000001 * h >= t_end;
        if (last) h = t_end - t;

        const Vec4 k2 = f(Vec4(y + h * (a21 * k1)));
        const Vec4 k3 = f(Vec4(y + h * (a31 * k1 + a32 * k2)));
        const Vec4 k4 = f(Vec4(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vec4 k5 = f(Vec4(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vec4 k6 = f(Vec4(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vec4 ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec4 k7 = f(ynew);
        const Vec4 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, ynew, opt.tolerance);
        if (en <= 1.0) {
            Trajectory::Step step;
            step.t = t;
            step.h = h;
            const Vec4 ydiff = ynew - y;
            const Vec4 bspl = h * k1 - ydiff;
            step.cont[0] = y;
            step.cont[1] = ydiff;
            step.cont[2] = bspl;
            step.cont[3] = ydiff - h * k7 - bspl;
            step.cont[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            traj.steps_.push_back(step);

            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            traj.energy_drift_ = std::max(
                traj.energy_drift_,
                std::abs(hamiltonian(sys, unpack_state(y)) - traj.initial_energy_));
            if (last || t >= t_end) {
                traj.final_state_ = y;
                traj.end_time_ = t_end;
                return traj;
            }
            const double fac = std::min(rejected ? 1.0 : 5.0,
                                        std::max(0.2, 0.9 * std::pow(en, -0.2)));
            h = std::min(h * fac, opt.max_step);
            rejected = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            rejected = true;
        }
    }
    throw Error("integration exceeded the step budget");
}

std::vector<AxisCrossing> detect_axis_crossings(const Trajectory& traj, Axis axis,
                                                double time_tol) {
    const int ci = axis == Axis::Q2Zero ? 1 : 0;
    const int vi = ci + 2;
    std::vector<AxisCrossing> events;
    if (traj.steps().empty()) return events;

    auto record = [&](double t) {
        const Vec4 y = traj.state_at(t);
        if (!events.empty() && t - events.back().t < 10.0 * time_tol) return;
        events.push_back({t, Vec2(y[0], y[1]), y[vi]});
    };

    const Vec4 y0 = traj.steps().front().cont[0];
    if (y0[ci] == 0.0) record(traj.t0());

    constexpr int kSub = 8;
    double t_prev = traj.t0();
    double v_prev = y0[ci];
    for (const Trajectory::Step& s : traj.steps()) {
        for (int j = 1; j <= kSub; ++j) {
            const double t_j = s.t + s.h * j / kSub;
            const double v_j = dense_eval(s, static_cast<double>(j) / kSub)[ci];
            if (v_j == 0.0) {
                record(t_j);
            } else if (v_prev != 0.0 && (v_prev < 0.0) != (v_j < 0.0)) {
                double lo = t_prev, hi = t_j, flo = v_prev;
                while (hi - lo > time_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    const double fm = traj.state_at(mid)[ci];
                    if (fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((flo < 0.0) == (fm < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                record(0.5 * (lo + hi));
            }
            t_prev = t_j;
            v_prev = v_j;
        }
    }
    return events;
}

namespace {

struct CrossingHit {
    double t = 0.0;   // global time of the first axis crossing
    Vec4 state = Vec4::Zero();
};

// First q2 = 0 crossing with t above a small clip, integrating in chunks so
// wandering non-periodic probes fail fast instead of hitting a primary.
std::optional<CrossingHit> first_axis_crossing(const System& sys, const PhaseState& s0,
                                               double t_clip, double t_max, double tol) {
    IntegrateOptions io;
    io.tolerance = tol;
    PhaseState state = s0;
    double t_base = 0.0;
    while (t_base < t_max) {
        const double chunk = std::min(2.0, t_max - t_base);
        Trajectory traj;
        try {
            traj = integrate(sys, state, chunk, io);
        } catch (const SingularityApproachError&) {
            return std::nullopt;
        } catch (const StepUnderflowError&) {
            return std::nullopt;
        }
        for (const AxisCrossing& ev : detect_axis_crossings(traj, Axis::Q2Zero)) {
            const double t_global = t_base + ev.t;
            if (t_global > t_clip) return CrossingHit{t_global, traj.state_at(ev.t)};
        }
        state = unpack_state(traj.final_state());
        t_base += chunk;
    }
    return std::nullopt;
}

int crossing_side(const System& sys, const Vec2& q) {
    if (sys.kind == SystemKind::PCR3BP) {
        if (q.x() > sys.earth.x()) return +1;
        if (q.x() < sys.sun.x()) return -1;
        return 0;
    }
    return q.x() > 0.0 ? +1 : -1;
}

bool energy_precondition(const System& sys, double c, const Vec2& q0) {
    switch (sys.kind) {
        case SystemKind::PCR3BP: {
            const CriticalEnergies e = critical_energies(MassRatio(sys.mu));
            if (!(c < e.light())) return false;
            const auto m = contains(MassRatio(sys.mu), c, q0);
            return m.inside && m.label && *m.label != ComponentLabel::Unbounded;
        }
        case SystemKind::RotatingKepler:
            return c < rotating_kepler_critical_value() && q0.norm() < 1.0;
        case SystemKind::HillLunar:
            return c < hill_critical_value() && q0.norm() < std::pow(3.0, -1.0 / 3.0);
    }
    return false;
}

} // namespace

PeriodicOrbit find_symmetric_orbit(const System& sys, double c, double q1_guess, Direction dir,
                                   const ShootOptions& opt) {
    const double sign = dir == Direction::Direct ? +1.0 : -1.0;

    auto on_axis_speed = [&](double x) -> std::optional<double> {
        const Vec2 q(x, 0.0);
        if (min_singularity_distance(sys, q) < 1e-4) return std::nullopt;
        const double k = c - effective_potential(sys, q);
        if (k <= 1e-12) return std::nullopt;
        return std::sqrt(2.0 * k);
    };

    struct FEval {
        double v1;
        double t_half;
    };
    auto shoot = [&](double x) -> std::optional<FEval> {
        const auto speed = on_axis_speed(x);
        if (!speed) return std::nullopt;
        const PhaseState s0{{x, 0.0}, {0.0, sign * *speed}};
        const auto hit = first_axis_crossing(sys, s0, 1e-4, opt.max_flight_time,
                                             opt.integrator_tolerance);
        if (!hit) return std::nullopt;
        return FEval{hit->state[2], hit->t};
    };

    if (!on_axis_speed(q1_guess))
        throw GuessOutsideRegionError("initial guess is outside the accessible region at this "
                                      "energy");

    // Expand around the guess until two probes bracket v1 = 0.
    struct Probe {
        double x;
        FEval f;
    };
    std::vector<Probe> probes;
    auto try_probe = [&](double x) -> const Probe* {
        const auto f = shoot(x);
        if (!f) return nullptr;
        probes.push_back({x, *f});
        return &probes.back();
    };

    double xa = 0.0, xb = 0.0;
    bool bracketed = false;
    if (try_probe(q1_guess)) {
        for (int k = 1; k <= opt.max_expand && !bracketed; ++k) {
            for (double s : {+1.0, -1.0}) {
                const double x = q1_guess + s * k * opt.scan_step;
                const Probe* p = try_probe(x);
                if (!p) continue;
                for (const Probe& other : probes) {
                    if (&other == p) continue;
                    if (other.f.v1 * p->f.v1 < 0.0) {
                        xa = std::min(other.x, p->x);
                        xb = std::max(other.x, p->x);
                        bracketed = true;
                        break;
                    }
                }
                if (bracketed) break;
            }
        }
    }
    if (!bracketed)
        throw NoConvergenceError("no perpendicular-return bracket found near the guess");

    auto value_at = [&](double x) -> std::optional<double> {
        const auto f = shoot(x);
        if (!f) return std::nullopt;
        return f->v1;
    };
    auto fa = value_at(xa), fb = value_at(xb);
    if (!fa || !fb || *fa * *fb > 0.0)
        throw NoConvergenceError("bracket evaluation failed");

    // Secant steps guarded by the bracket, falling back to bisection.
    double x_root = xa, f_root = *fa;
    for (int it = 0; it < 80; ++it) {
        double x_try = 0.5 * (xa + xb);
        if (*fb != *fa) {
            const double sec = xb - *fb * (xb - xa) / (*fb - *fa);
            if (sec > xa + 0.1 * (xb - xa) && sec < xb - 0.1 * (xb - xa)) x_try = sec;
        }
        const auto f_try = value_at(x_try);
        if (!f_try) throw NoConvergenceError("shooting probe failed inside the bracket");
        x_root = x_try;
        f_root = *f_try;
        if (std::abs(f_root) < 1e-12 || xb - xa < 1e-15 * std::max(1.0, std::abs(x_try))) break;
        if ((*fa < 0.0) == (f_root < 0.0)) {
            xa = x_try;
            fa = f_root;
        } else {
            xb = x_try;
            fb = f_root;
        }
    }

    const auto f_final = shoot(x_root);
    if (!f_final) throw NoConvergenceError("converged parameter no longer integrates");

    PeriodicOrbit orbit;
    orbit.system = sys;
    orbit.initial = PhaseState{{x_root, 0.0}, {0.0, sign * *on_axis_speed(x_root)}};
    orbit.period = 2.0 * f_final->t_half;
    orbit.energy = hamiltonian(sys, orbit.initial);
    orbit.symmetric = true;

    IntegrateOptions io;
    io.tolerance = opt.integrator_tolerance;
    const Trajectory check = integrate(sys, orbit.initial, orbit.period, io);
    orbit.residual = (check.final_state() - pack_state(orbit.initial)).cwiseAbs().maxCoeff();
    if (!(orbit.residual < opt.residual_target))
        throw NoConvergenceError("periodic orbit residual " + std::to_string(orbit.residual) +
                                 " above target");
    return orbit;
}

SyzygyReport verify_syzygy_theorem(const PeriodicOrbit& orbit) {
    const System& sys = orbit.system;
    const double T = orbit.period;
    SyzygyReport rep;
    rep.precondition_met = energy_precondition(sys, orbit.energy, orbit.initial.q);

    IntegrateOptions io;
    io.tolerance = 1e-12;
    const Trajectory traj = integrate(sys, orbit.initial, T, io);

    if (traj.stationary(1e-9)) {
        rep.degenerate_on_axis = std::abs(orbit.initial.q.y()) < 1e-12;
        return rep;
    }

    const double wrap_eps = std::max(1e-7, 1e-9 * T);
    for (const AxisCrossing& ev : detect_axis_crossings(traj, Axis::Q2Zero)) {
        if (ev.t >= T - wrap_eps) continue;
        rep.events.push_back({ev.t, ev.q, ev.crossing_velocity, crossing_side(sys, ev.q)});
    }
    rep.count = static_cast<int>(rep.events.size());
    rep.transverse = !rep.events.empty();
    for (const SyzygyEvent& ev : rep.events)
        if (std::abs(ev.crossing_velocity) <= 1e-8) rep.transverse = false;

    double integral = 0.0;
    for (const Trajectory::Step& s : traj.steps()) {
        double acc = 0.0;
        for (int j = 0; j < kQuadPoints; ++j) {
            const Vec4 y = dense_eval(s, kQuadX[j]);
            acc += kQuadW[j] * grad_V(sys, Vec2(y[0], y[1])).y();
        }
        integral += s.h * acc;
    }
    rep.period_integral = integral;

    if (rep.precondition_met) {
        if (rep.count < 2)
            throw VerificationError("periodic orbit in the bounded region has fewer than two "
                                    "syzygies");
        if (!(std::abs(rep.period_integral) < 1e-8))
            throw VerificationError("period integral of V_q2 did not vanish: " +
                                    std::to_string(rep.period_integral));
    }
    return rep;
}

int crossing_count(const PeriodicOrbit& orbit, Axis axis) {
    IntegrateOptions io;
    io.tolerance = 1e-12;
    const Trajectory traj = integrate(orbit.system, orbit.initial, orbit.period, io);
    const double wrap_eps = std::max(1e-7, 1e-9 * orbit.period);
    int count = 0;
    for (const AxisCrossing& ev : detect_axis_crossings(traj, axis))
        if (ev.t < orbit.period - wrap_eps) ++count;
    return count;
}

HillRegionCheck hill_bounded_region_check(double c, const TraceOptions& opt) {
    HillRegionCheck check;
    check.bound = std::pow(3.0, -1.0 / 3.0);
    const OvalCurve oval = trace_system_oval(hill_lunar(), c, ComponentLabel::Bounded, opt);
    for (const Vec2& v : oval.vertices) check.max_radius = std::max(check.max_radius, v.norm());
    check.inside = check.max_radius < check.bound;
    return check;
}

} // namespace tbp
