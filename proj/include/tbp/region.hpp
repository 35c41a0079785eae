#pragma once

// Hill's regions and ovals of zero velocity: membership tests, topology
// classification as the energy sweeps the critical values, and
// predictor--corrector tracing of level curves of the effective potential.

#include <functional>
#include <optional>
#include <vector>

#include "tbp/critical.hpp"
#include "tbp/systems.hpp"
#include "tbp/types.hpp"

namespace tbp {

enum class HillTopology {
    AllPlane,             // c >= h45: everything but the primaries
    TwoHoles,             // holes around l4 and l5
    Horseshoe,            // single horseshoe-shaped hole
    BoundedPlusUnbounded, // bounded peanut around both primaries + outer part
    ThreeComponents       // discs around each primary + outer part
};

const char* to_string(HillTopology cls);

struct TopologyClass {
    HillTopology cls = HillTopology::AllPlane;
    int component_count = 1;  // connected components of the Hill's region
};

/// Topology of the Hill's region of the PCR3BP at energy c. Rejects energies
/// within 1e-9 of a critical value (the region is degenerate there).
TopologyClass classify(MassRatio mu, double c);

enum class ComponentLabel { Bounded, Unbounded, Earth, Sun };

const char* to_string(ComponentLabel label);

struct Membership {
    bool inside = false;
    std::optional<ComponentLabel> label;
};

/// Membership of q in the Hill's region {V <= c}, with the containing
/// component identified by straight-probe connectivity to reference points
/// (the primaries, l1 and the far field).
Membership contains(MassRatio mu, double c, const Vec2& q);

struct TraceOptions {
    double step = 1e-3;        // predictor step along the tangent
    double level_tol = 1e-10;  // corrector target |F - level|
    long max_steps = 1000000;
    int max_newton = 12;
};

/// A traced level curve; closed curves repeat the first vertex at the end.
struct LevelCurve {
    std::vector<Vec2> vertices;
    bool closed = false;
};

using ScalarField = std::function<double(const Vec2&)>;
using GradientField = std::function<Vec2(const Vec2&)>;

/// Generic level-set tracer: predictor steps along the rotated gradient
/// (g2, -g1)/|g|, Newton corrections along the gradient until
/// |F - level| < level_tol. The step is halved whenever the corrector needs
/// more than 5 iterations. Stops on closure (back within 2h of the seed), on
/// leaving `clip` when given, or throws NoClosureError at the step budget.
LevelCurve trace_level_curve(const ScalarField& f, const GradientField& grad, double level,
                             const Vec2& seed, const TraceOptions& opt = {},
                             const Box2* clip = nullptr);

enum class TraceTermination { Closed, Clipped, Budget, CorrectorFailed };

struct TraceOutcome {
    LevelCurve curve;
    TraceTermination termination = TraceTermination::Budget;
};

/// Lower-level tracer for multi-component contouring: traces from the seed
/// in one orientation (+1 or -1 along the rotated gradient) and reports how
/// the trace ended instead of throwing.
TraceOutcome trace_level_curve_directed(const ScalarField& f, const GradientField& grad,
                                        double level, const Vec2& seed, int orientation,
                                        const TraceOptions& opt = {}, const Box2* clip = nullptr);

struct OvalCurve {
    System system;
    std::vector<Vec2> vertices;  // closed: last vertex == first vertex
    bool closed = false;
    ComponentLabel component_label = ComponentLabel::Bounded;
    double energy = 0.0;
    double mu = 0.0;
    double trace_step = 0.0;
    double level_tol = 0.0;
};

/// Trace one connected component of the zero-velocity oval V^-1(c) for the
/// PCR3BP with mass ratio mu (rotating-Kepler limit for mu in {0,1}).
OvalCurve trace_oval(MassRatio mu, double c, ComponentLabel which, const TraceOptions& opt = {});

/// Same, for an explicit system (used for Hill's lunar problem ovals).
OvalCurve trace_system_oval(const System& sys, double c, ComponentLabel which,
                            const TraceOptions& opt = {});

/// Tight axis-aligned bounding box of the traced bounded oval.
Box2 bounded_region_bounds(MassRatio mu, double c, const TraceOptions& opt = {});

/// Number of connected components of V^-1(c), found by seeding along the
/// q1-axis and the vertical line through l4 and deduplicating traces.
int count_oval_components(MassRatio mu, double c, const TraceOptions& opt = {});

/// Distance from a point to a polyline (segments, not just vertices).
double point_polyline_distance(const Vec2& p, const std::vector<Vec2>& polyline);

} // namespace tbp
