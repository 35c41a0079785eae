#include "tbp/io.hpp"

#include <cstdio>
#include <fstream>

#include "tbp/errors.hpp"

namespace tbp {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void to_json(json& j, const Vec2& v) { j = json::array({v.x(), v.y()}); }

void to_json(json& j, const CriticalPoint& p) {
    j = json{{"label", to_string(p.label)},
             {"location", p.location},
             {"value", p.value},
             {"morse_index", p.morse_index}};
}

void to_json(json& j, const CriticalEnergies& e) {
    j = json{{"h1", e.h1}, {"h2", e.h2}, {"h3", e.h3}, {"h45", e.h45}};
}

void to_json(json& j, const TopologyClass& t) {
    j = json{{"class", to_string(t.cls)}, {"component_count", t.component_count}};
}

void to_json(json& j, const Membership& m) {
    j = json{{"inside", m.inside}};
    j["component"] = m.label ? json(to_string(*m.label)) : json(nullptr);
}

void to_json(json& j, const OvalCurve& oval) {
    json vertices = json::array();
    for (const Vec2& v : oval.vertices) vertices.push_back(v);
    j = json{{"mu", oval.mu},
             {"energy", oval.energy},
             {"component", to_string(oval.component_label)},
             {"closed", oval.closed},
             {"trace_step", oval.trace_step},
             {"level_tol", oval.level_tol},
             {"vertex_count", oval.vertices.size()},
             {"vertices", std::move(vertices)}};
}

void to_json(json& j, const TangentReport& r) {
    json locations = json::array();
    for (const Vec2& v : r.locations) locations.push_back(v);
    j = json{{"count", r.count},
             {"locations", std::move(locations)},
             {"on_axis", r.on_axis},
             {"all_on_axis", r.all_on_axis()}};
}

void to_json(json& j, const BaseCaseCertificate& c) {
    j = json{{"grid_step", c.grid_step},
             {"arc_min", c.arc_min},
             {"arc_bound", c.arc_bound},
             {"arc_ok", c.arc_ok},
             {"lid_min", c.lid_min},
             {"lid_bound", c.lid_bound},
             {"lid_ok", c.lid_ok},
             {"zero_set_min", c.zero_set_min},
             {"zero_set_bound", c.zero_set_bound},
             {"zero_set_ok", c.zero_set_ok},
             {"epsilon", c.epsilon},
             {"epsilon_sup", c.epsilon_sup},
             {"oval_ok", c.oval_ok},
             {"certified", c.certified()}};
}

void to_json(json& j, const ContinuationSample& s) {
    j = json{{"mu", s.mu},
             {"c", s.c},
             {"tangent_count", s.tangent_count},
             {"on_axis", s.on_axis},
             {"min_w_margin", s.min_w_margin}};
}

void to_json(json& j, const ContinuationReport& r) {
    j = json{{"samples", r.samples}, {"pass", r.pass}, {"offending", r.offending}};
}

void to_json(json& j, const GridScan& s) {
    j = json{{"all_positive", s.all_positive},
             {"min_value", s.min_value},
             {"argmin", s.argmin},
             {"points", s.points}};
}

void to_json(json& j, const PeriodicOrbit& o) {
    j = json{{"initial", json{{"q", o.initial.q}, {"v", o.initial.v}}},
             {"period", o.period},
             {"energy", o.energy},
             {"symmetric", o.symmetric},
             {"residual", o.residual}};
}

void to_json(json& j, const SyzygyEvent& e) {
    j = json{{"t", e.t},
             {"q", e.q},
             {"crossing_velocity", e.crossing_velocity},
             {"side", e.side}};
}

void to_json(json& j, const SyzygyReport& r) {
    j = json{{"events", r.events},
             {"count", r.count},
             {"transverse", r.transverse},
             {"period_integral", r.period_integral},
             {"precondition_met", r.precondition_met},
             {"degenerate_on_axis", r.degenerate_on_axis}};
}

void to_json(json& j, const HillRegionCheck& c) {
    j = json{{"inside", c.inside}, {"max_radius", c.max_radius}, {"bound", c.bound}};
}

json envelope(json config, json result) {
    return json{{"schema", kSchemaVersion},
                {"config", std::move(config)},
                {"result", std::move(result)}};
}

std::string vertices_csv(const std::vector<Vec2>& points) {
    std::string out = "q1,q2\n";
    for (const Vec2& p : points)
        out += format_double(p.x()) + "," + format_double(p.y()) + "\n";
    return out;
}

std::string curves_csv(const std::vector<LevelCurve>& curves) {
    std::string out = "component,q1,q2\n";
    for (size_t i = 0; i < curves.size(); ++i)
        for (const Vec2& p : curves[i].vertices)
            out += std::to_string(i) + "," + format_double(p.x()) + "," +
                   format_double(p.y()) + "\n";
    return out;
}

std::string trajectory_csv(const Trajectory& traj, int samples) {
    if (samples < 2) throw Error("trajectory CSV needs at least two samples");
    std::string out = "t,q1,q2,v1,v2\n";
    for (int i = 0; i < samples; ++i) {
        const double t =
            traj.t0() + (traj.t1() - traj.t0()) * static_cast<double>(i) / (samples - 1);
        const Vec4 y = traj.state_at(t);
        out += format_double(t);
        for (int k = 0; k < 4; ++k) out += "," + format_double(y[k]);
        out += "\n";
    }
    return out;
}

std::string restricted_profile_csv(MassRatio mu, double x0, double x1, int samples,
                                   double exclusion) {
    if (samples < 2) throw Error("profile CSV needs at least two samples");
    std::string out = "x,u,du,ddu\n";
    const double xe = 1.0 - mu.value();
    const double xs = -mu.value();
    for (int i = 0; i < samples; ++i) {
        const double x = x0 + (x1 - x0) * static_cast<double>(i) / (samples - 1);
        if (std::abs(x - xe) < exclusion || std::abs(x - xs) < exclusion) continue;
        const RestrictedPotential u = restricted_potential(mu, x);
        out += format_double(x) + "," + format_double(u.value) + "," + format_double(u.d1) +
               "," + format_double(u.d2) + "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
    if (!f) throw Error("write failed: " + path);
}

} // namespace tbp
