#pragma once

// Trajectory integration with dense output and event detection, symmetric
// periodic-orbit search by single shooting, and verification of the syzygy
// and quadrature statements along periodic orbits.

#include <limits>
#include <optional>
#include <vector>

#include "tbp/region.hpp"
#include "tbp/systems.hpp"
#include "tbp/types.hpp"

namespace tbp {

struct IntegrateOptions {
    double tolerance = 1e-10;  // local error target (absolute and relative)
    double max_step = std::numeric_limits<double>::infinity();
    double singularity_guard = 1e-6;
    long max_steps = 20000000;
};

/// Dense ODE solution from the adaptive Dormand–Prince 5(4) integrator.
/// Each accepted step stores the coefficients of the order-4 continuous
/// extension, so states can be interpolated anywhere in [t0, t1].
class Trajectory {
public:
    struct Step {
        double t = 0.0;
        double h = 0.0;
        Vec4 cont[5];
    };

    const System& system() const { return system_; }
    double t0() const { return steps_.empty() ? 0.0 : steps_.front().t; }
    double t1() const { return end_time_; }
    const std::vector<Step>& steps() const { return steps_; }
    size_t step_count() const { return steps_.size(); }

    Vec4 state_at(double t) const;
    PhaseState phase_at(double t) const { return unpack_state(state_at(t)); }
    Vec4 final_state() const { return final_state_; }

    double initial_energy() const { return initial_energy_; }
    /// Max |H(node) - H(initial)| over all accepted nodes.
    double energy_drift() const { return energy_drift_; }

    /// True when the solution never leaves a tiny ball around its initial
    /// point (an equilibrium, e.g. a trajectory started at rest on l1).
    bool stationary(double tol = 1e-9) const;

private:
    friend Trajectory integrate(const System&, const PhaseState&, double,
                                const IntegrateOptions&);
    System system_;
    std::vector<Step> steps_;
    Vec4 final_state_ = Vec4::Zero();
    double end_time_ = 0.0;
    double initial_energy_ = 0.0;
    double energy_drift_ = 0.0;
};

Trajectory integrate(const System& sys, const PhaseState& initial, double t_end,
                     const IntegrateOptions& opt = {});

enum class Axis { Q2Zero, Q1Zero };

struct AxisCrossing {
    double t = 0.0;
    Vec2 q = Vec2::Zero();
    double crossing_velocity = 0.0;  // time derivative of the vanishing coordinate
};

/// Locate every sign change of the selected coordinate on the dense output,
/// refined by bisection in time to `time_tol`. A coordinate that is exactly
/// zero at t0 is reported as an event at t0.
std::vector<AxisCrossing> detect_axis_crossings(const Trajectory& traj, Axis axis,
                                                double time_tol = 1e-12);

enum class Direction { Retrograde, Direct };

struct PeriodicOrbit {
    System system;
    PhaseState initial;     // on-axis perpendicular crossing: q2 = 0, v1 = 0
    double period = 0.0;
    double energy = 0.0;
    bool symmetric = true;
    double residual = 0.0;  // max component of |flow(initial, period) - initial|
};

struct ShootOptions {
    double integrator_tolerance = 1e-12;
    double residual_target = 1e-10;
    double scan_step = 2e-3;   // bracket expansion step around the guess
    int max_expand = 400;      // bracket expansion budget
    double max_flight_time = 50.0;
};

/// Search the one-parameter family of symmetric states (q1, 0, 0, v2(c)) for
/// a perpendicular return to the axis (v1 = 0 at the next q2 = 0 crossing).
/// The full period is twice the half period by reflection symmetry.
PeriodicOrbit find_symmetric_orbit(const System& sys, double c, double q1_guess, Direction dir,
                                   const ShootOptions& opt = {});

struct SyzygyEvent {
    double t = 0.0;
    Vec2 q = Vec2::Zero();
    double crossing_velocity = 0.0;
    int side = 0;  // +1 beyond earth, 0 between the primaries, -1 beyond the sun
};

struct SyzygyReport {
    std::vector<SyzygyEvent> events;
    int count = 0;
    bool transverse = false;       // all |crossing_velocity| > 1e-8
    double period_integral = 0.0;  // integral of V_q2 along one period
    bool precondition_met = false; // bounded component, c below min(h2,h3)
    bool degenerate_on_axis = false;  // stationary orbit sitting on the axis
};

/// Count syzygies over one period, integrate V_q2 along the orbit with
/// per-step Gauss–Legendre quadrature on the dense output, and check
/// transversality. When the energy precondition holds, count >= 2 and
/// |integral| < 1e-8 are enforced (VerificationError otherwise); outside the
/// precondition the report is informational.
SyzygyReport verify_syzygy_theorem(const PeriodicOrbit& orbit);

/// Axis crossings of a periodic orbit over one period, counted without the
/// duplicate at t = period.
int crossing_count(const PeriodicOrbit& orbit, Axis axis);

struct HillRegionCheck {
    bool inside = false;
    double max_radius = 0.0;
    double bound = 0.0;  // 3^(-1/3)
};

/// Trace the bounded Hill-lunar oval at energy c below the critical value
/// and verify it stays inside the ball of radius 3^(-1/3).
HillRegionCheck hill_bounded_region_check(double c, const TraceOptions& opt = {});

} // namespace tbp
