#pragma once

// Everything about the vertical-tangent structure of zero-velocity ovals.
// The q2-derivative of the effective potential factors as
//   V_q2(q) = q2 * W_mu(q),   W_mu(q) = mu/|q-e|^3 + (1-mu)/|q-s|^3 - 1,
// so vertical tangents of an oval are sign changes of V_q2 along it. This
// module evaluates and traces W, counts vertical tangents, certifies the
// mu = 1/2 base case on padded grids, and runs the tangent-count
// continuation check along paths in (mu, energy) space.

#include <vector>

#include "tbp/region.hpp"
#include "tbp/systems.hpp"
#include "tbp/types.hpp"

namespace tbp {

/// W_mu(q) = mu/|q-e|^3 + (1-mu)/|q-s|^3 - 1 for mu in [0,1]; terms with
/// zero mass carry no pole and are skipped.
double eval_W(double mu, const Vec2& q);

Vec2 grad_W(double mu, const Vec2& q);

/// Trace the closed curve {W_mu = 0} (diffeomorphic to the unit circle for
/// every mu). Verifies |grad W| > 1e-6 at every vertex, since 0 must be a
/// regular value of W.
LevelCurve trace_W_zero(double mu, const TraceOptions& opt = {});

struct TangentReport {
    int count = 0;
    std::vector<Vec2> locations;
    std::vector<bool> on_axis;  // |q2| < 1e-8 per location

    bool all_on_axis() const {
        for (bool b : on_axis)
            if (!b) return false;
        return true;
    }
};

/// Localize the vertical tangents of a closed oval: every sign change of
/// V_q2 along the polyline, refined by bisection on the segment parameter
/// to 1e-10.
TangentReport vertical_tangents(const OvalCurve& oval);

/// Piecewise-linear path in (mu, energy) space, every sample strictly
/// between the first and second critical values.
struct ParameterPath {
    std::vector<std::pair<double, double>> samples;  // (mu, c)
    int resolution = 0;
    double step_bound = 1e-2;
};

/// Linear path in (mu, normalized energy) mapped through the critical
/// energies, where normalized energy n in (0,1) means
/// c = h1 + n (min(h2,h3) - h1).
ParameterPath make_parameter_path(double mu0, double n0, double mu1, double n1, int samples);

/// Throws PathInvariantError unless every sample lies strictly between the
/// critical values and consecutive samples differ by less than step_bound.
void validate_path(const ParameterPath& path);

/// Grid certificate for the mu = 1/2 base case. The three estimates are
/// checked on grids with worst-case padding (Lipschitz constants from cell
/// corners; exact distance-monotone bounds near the primaries), and a
/// concrete epsilon is produced by bisection such that the bounded oval at
/// c = -2 + epsilon stays inside B_1(0) and below |q2| = 2/3.
struct BaseCaseCertificate {
    double grid_step = 0.0;
    double arc_min = 0.0;       // certified min of V on the unit-circle arc
    double arc_bound = 0.0;     // -1 - 1/sqrt(5) - 1/2
    double lid_min = 0.0;       // certified min of V on {|q|<1, q2 >= 2/3}
    double lid_bound = 0.0;     // -37/20
    double zero_set_min = 0.0;  // certified min of |q-e|^-3/2 + |q-s|^-3/2
    double zero_set_bound = 0.0;  // 3416/3375
    double epsilon = 0.0;
    double epsilon_sup = 0.0;  // bisection estimate of the largest workable offset
    bool arc_ok = false;
    bool lid_ok = false;
    bool zero_set_ok = false;
    bool oval_ok = false;

    bool certified() const { return arc_ok && lid_ok && zero_set_ok && oval_ok && epsilon > 0.0; }
};

BaseCaseCertificate base_case_certificate(double grid_step = 1e-3);

struct ContinuationSample {
    double mu = 0.0;
    double c = 0.0;
    int tangent_count = 0;
    bool on_axis = false;
    double min_w_margin = 0.0;  // min |W| over the tangent points
};

struct ContinuationReport {
    std::vector<ContinuationSample> samples;
    bool pass = false;
    int offending = -1;  // first sample violating count == 2 / on-axis / margin
};

/// For every path sample: trace the bounded oval, count vertical tangents
/// (must be 2, both on the q1-axis) and check the on-axis non-inflexion
/// margin |W| > 1e-6 at the tangent points.
ContinuationReport continuation_check(const ParameterPath& path, const TraceOptions& opt = {});

struct GridScan {
    bool all_positive = false;
    double min_value = 0.0;
    Vec2 argmin = Vec2::Zero();
    long points = 0;
};

/// Evaluate W_mu on every grid point inside the bounded Hill's region.
GridScan W_positive_on_region(double mu, double c, double grid_step);

/// Contour-trace {V_q1 = 0} inside the clip window; multi-component, open
/// arcs are clipped at the window. Emitted for plotting.
std::vector<LevelCurve> trace_Vq1_zero(double mu, const Box2& window,
                                       const TraceOptions& opt = {});

} // namespace tbp
