// Command-line front end: every operation of the library behind a
// subcommand, emitting CSV or JSON for plots and batch verification runs.
//
// Exit codes: 0 success, 1 a verified numerical claim failed, 2 usage or
// evaluation error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "tbp/critical.hpp"
#include "tbp/errors.hpp"
#include "tbp/io.hpp"
#include "tbp/orbits.hpp"
#include "tbp/region.hpp"
#include "tbp/systems.hpp"
#include "tbp/tangent.hpp"

namespace {

using nlohmann::json;
using namespace tbp;

struct OutputOptions {
    std::string format = "json";
    std::string out;
};

void add_output_options(CLI::App* cmd, OutputOptions& o, bool allow_csv = true) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember(allow_csv ? std::vector<std::string>{"json", "csv"}
                                        : std::vector<std::string>{"json"}))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
}

void emit(const OutputOptions& o, const std::string& content) {
    if (o.out.empty())
        std::cout << content;
    else
        write_file(o.out, content);
}

void emit_json(const OutputOptions& o, const json& doc) { emit(o, doc.dump(2) + "\n"); }

double resolve_energy(double mu, std::optional<double> energy,
                      std::optional<double> normalized) {
    if (energy && normalized) throw Error("give either --energy or --normalized-energy");
    if (energy) return *energy;
    if (!normalized) throw Error("an energy is required (--energy or --normalized-energy)");
    if (!(*normalized > 0.0 && *normalized < 1.0))
        throw Error("--normalized-energy must lie in (0,1)");
    const CriticalEnergies e = critical_energies(MassRatio(mu));
    return e.h1 + *normalized * (e.light() - e.h1);
}

ComponentLabel parse_component(const std::string& name) {
    if (name == "bounded") return ComponentLabel::Bounded;
    if (name == "unbounded") return ComponentLabel::Unbounded;
    if (name == "earth") return ComponentLabel::Earth;
    if (name == "sun") return ComponentLabel::Sun;
    throw Error("unknown component label: " + name);
}

Direction parse_direction(const std::string& name) {
    if (name == "retrograde") return Direction::Retrograde;
    if (name == "direct") return Direction::Direct;
    throw Error("unknown direction: " + name);
}

int run_lagrange(double mu, const OutputOptions& out) {
    const auto points = lagrange_points(MassRatio(mu));
    if (out.format == "csv") {
        std::string csv = "label,q1,q2,value,morse_index\n";
        for (const CriticalPoint& p : points)
            csv += std::string(to_string(p.label)) + "," + format_double(p.location.x()) + "," +
                   format_double(p.location.y()) + "," + format_double(p.value) + "," +
                   std::to_string(p.morse_index) + "\n";
        emit(out, csv);
    } else {
        emit_json(out, envelope(json{{"mu", mu}},
                                json{{"points", points},
                                     {"energies", critical_energies(MassRatio(mu))}}));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerics for the planar circular restricted three-body problem and Hill's "
                 "lunar problem: Lagrange points, Hill regions, zero-velocity ovals, vertical "
                 "tangents, periodic orbits and syzygy verification."};
    app.require_subcommand(1);

    int rc = 0;

    // ---- lagrange ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("lagrange", "The five Lagrange points with Morse indices "
                                                   "and critical energies");
        auto mu = std::make_shared<double>(0.5);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in (0,1)")->required();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, out] { rc = run_lagrange(*mu, *out); });
    }

    // ---- energies ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("energies", "Critical energies; --profile emits the "
                                                   "restricted axis potential u(x)");
        auto mu = std::make_shared<double>(0.5);
        auto profile = std::make_shared<bool>(false);
        auto x0 = std::make_shared<double>(-1.8);
        auto x1 = std::make_shared<double>(1.8);
        auto samples = std::make_shared<int>(2001);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in [0,1]")->required();
        cmd->add_flag("--profile", *profile, "Emit CSV samples of u, u', u'' along the axis");
        cmd->add_option("--x-min", *x0, "Profile window start")->capture_default_str();
        cmd->add_option("--x-max", *x1, "Profile window end")->capture_default_str();
        cmd->add_option("--samples", *samples, "Profile sample count")->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, profile, x0, x1, samples, out] {
            if (*profile) {
                emit(*out, restricted_profile_csv(MassRatio(*mu), *x0, *x1, *samples));
            } else if (MassRatio(*mu).degenerate()) {
                emit_json(*out, envelope(json{{"mu", *mu}},
                                         json{{"degenerate", true},
                                              {"critical_value",
                                               rotating_kepler_critical_value()}}));
            } else {
                emit_json(*out, envelope(json{{"mu", *mu}},
                                         json{{"energies", critical_energies(MassRatio(*mu))}}));
            }
            rc = 0;
        });
    }

    // ---- classify ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("classify", "Topology class of the Hill's region at an "
                                                   "energy");
        auto mu = std::make_shared<double>(0.5);
        auto energy = std::make_shared<std::optional<double>>();
        auto normalized = std::make_shared<std::optional<double>>();
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in (0,1)")->required();
        cmd->add_option("--energy", *energy, "Energy c");
        cmd->add_option("--normalized-energy", *normalized,
                        "Energy position in (0,1) between h1 and min(h2,h3)");
        add_output_options(cmd, *out, false);
        cmd->callback([&rc, mu, energy, normalized, out] {
            const double c = resolve_energy(*mu, *energy, *normalized);
            emit_json(*out, envelope(json{{"mu", *mu}, {"energy", c}},
                                     json{{"topology", classify(MassRatio(*mu), c)}}));
            rc = 0;
        });
    }

    // ---- oval ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("oval", "Trace one component of the zero-velocity oval");
        auto mu = std::make_shared<double>(0.5);
        auto energy = std::make_shared<std::optional<double>>();
        auto normalized = std::make_shared<std::optional<double>>();
        auto component = std::make_shared<std::string>("bounded");
        auto step = std::make_shared<double>(1e-3);
        auto tol = std::make_shared<double>(1e-10);
        auto out = std::make_shared<OutputOptions>();
        out->format = "csv";
        cmd->add_option("--mu", *mu, "Mass ratio in [0,1]")->required();
        cmd->add_option("--energy", *energy, "Energy c");
        cmd->add_option("--normalized-energy", *normalized, "Normalized energy in (0,1)");
        cmd->add_option("--component", *component, "bounded | unbounded | earth | sun")
            ->capture_default_str();
        cmd->add_option("--step", *step, "Predictor step")->capture_default_str();
        cmd->add_option("--tol", *tol, "Corrector tolerance |V - c|")->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, energy, normalized, component, step, tol, out] {
            double c;
            if (MassRatio(*mu).degenerate()) {
                if (!*energy) throw Error("degenerate mu requires an explicit --energy");
                c = **energy;
            } else {
                c = resolve_energy(*mu, *energy, *normalized);
            }
            TraceOptions opt;
            opt.step = *step;
            opt.level_tol = *tol;
            const OvalCurve oval = trace_oval(MassRatio(*mu), c, parse_component(*component),
                                              opt);
            if (out->format == "csv")
                emit(*out, vertices_csv(oval.vertices));
            else
                emit_json(*out, envelope(json{{"mu", *mu},
                                              {"energy", c},
                                              {"component", *component},
                                              {"step", *step},
                                              {"tol", *tol}},
                                         json{{"oval", oval}}));
            rc = 0;
        });
    }

    // ---- wzero ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("wzero", "Trace the zero set of the factor W of V_q2");
        auto mu = std::make_shared<double>(0.5);
        auto step = std::make_shared<double>(1e-3);
        auto out = std::make_shared<OutputOptions>();
        out->format = "csv";
        cmd->add_option("--mu", *mu, "Mass ratio in [0,1]")->required();
        cmd->add_option("--step", *step, "Predictor step")->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, step, out] {
            TraceOptions opt;
            opt.step = *step;
            const LevelCurve curve = trace_W_zero(*mu, opt);
            if (out->format == "csv")
                emit(*out, vertices_csv(curve.vertices));
            else {
                json vertices = json::array();
                for (const Vec2& v : curve.vertices) vertices.push_back(v);
                emit_json(*out, envelope(json{{"mu", *mu}, {"step", *step}},
                                         json{{"closed", curve.closed},
                                              {"vertex_count", curve.vertices.size()},
                                              {"vertices", std::move(vertices)}}));
            }
            rc = 0;
        });
    }

    // ---- tangents --------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tangents", "Vertical tangents of a traced oval");
        auto mu = std::make_shared<double>(0.5);
        auto energy = std::make_shared<std::optional<double>>();
        auto normalized = std::make_shared<std::optional<double>>();
        auto component = std::make_shared<std::string>("bounded");
        auto step = std::make_shared<double>(1e-3);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in [0,1]")->required();
        cmd->add_option("--energy", *energy, "Energy c");
        cmd->add_option("--normalized-energy", *normalized, "Normalized energy in (0,1)");
        cmd->add_option("--component", *component, "Oval component")->capture_default_str();
        cmd->add_option("--step", *step, "Predictor step")->capture_default_str();
        add_output_options(cmd, *out, false);
        cmd->callback([&rc, mu, energy, normalized, component, step, out] {
            const double c = resolve_energy(*mu, *energy, *normalized);
            TraceOptions opt;
            opt.step = *step;
            const OvalCurve oval = trace_oval(MassRatio(*mu), c, parse_component(*component),
                                              opt);
            const TangentReport report = vertical_tangents(oval);
            emit_json(*out, envelope(json{{"mu", *mu}, {"energy", c}, {"component", *component}},
                                     json{{"tangents", report}}));
            rc = 0;
        });
    }

    // ---- certify-base ------------------------------------------------
    {
        auto* cmd = app.add_subcommand("certify-base", "Certify the mu = 1/2 base-case bounds "
                                                       "on a padded grid and produce epsilon");
        auto grid_step = std::make_shared<double>(1e-3);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--grid-step", *grid_step, "Certification grid step (<= 1e-3)")
            ->capture_default_str();
        add_output_options(cmd, *out, false);
        cmd->callback([&rc, grid_step, out] {
            const BaseCaseCertificate cert = base_case_certificate(*grid_step);
            emit_json(*out, envelope(json{{"grid_step", *grid_step}},
                                     json{{"certificate", cert}}));
            rc = cert.certified() ? 0 : 1;
        });
    }

    // ---- verify-lemma --------------------------------------------------
    {
        auto* cmd = app.add_subcommand("verify-lemma", "Tangent-count continuation along a path "
                                                       "in (mu, energy) space");
        auto path_kind = std::make_shared<std::string>("default");
        auto samples = std::make_shared<int>(200);
        auto mu_from = std::make_shared<double>(0.5);
        auto mu_to = std::make_shared<double>(0.2);
        auto normalized = std::make_shared<double>(0.5);
        auto w_grid = std::make_shared<bool>(false);
        auto grid_step = std::make_shared<double>(1e-3);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--path", *path_kind, "default | sweep")->capture_default_str();
        cmd->add_option("--samples", *samples, "Path resolution")->capture_default_str();
        cmd->add_option("--mu-from", *mu_from, "Sweep start mass ratio")->capture_default_str();
        cmd->add_option("--mu-to", *mu_to, "Sweep end mass ratio")->capture_default_str();
        cmd->add_option("--normalized-energy", *normalized, "Sweep normalized energy")
            ->capture_default_str();
        cmd->add_flag("--w-grid", *w_grid, "Also check W > 0 on a grid inside the bounded "
                                           "region at every sample");
        cmd->add_option("--grid-step", *grid_step, "W-grid step")->capture_default_str();
        add_output_options(cmd, *out, false);
        cmd->callback([&rc, path_kind, samples, mu_from, mu_to, normalized, w_grid, grid_step,
                       out] {
            ParameterPath path;
            if (*path_kind == "default") {
                // Base case (mu = 1/2, c = -2 + 1/12, the shipped certificate
                // epsilon) continued to mu = 0.2 at mid-band energy.
                const CriticalEnergies e = critical_energies(MassRatio(0.5));
                const double c0 = -2.0 + 1.0 / 12.0;
                const double n0 = (c0 - e.h1) / (e.light() - e.h1);
                path = make_parameter_path(0.5, n0, 0.2, 0.5, *samples);
            } else if (*path_kind == "sweep") {
                path = make_parameter_path(*mu_from, *normalized, *mu_to, *normalized, *samples);
            } else {
                throw Error("unknown path kind: " + *path_kind);
            }
            const ContinuationReport report = continuation_check(path);

            json result{{"report", report}};
            bool pass = report.pass;
            if (*w_grid) {
                json scans = json::array();
                for (const auto& [mu, c] : path.samples) {
                    const GridScan scan = W_positive_on_region(mu, c, *grid_step);
                    scans.push_back(json{{"mu", mu}, {"c", c}, {"scan", scan}});
                    pass = pass && scan.all_positive;
                }
                result["w_grid"] = std::move(scans);
            }
            emit_json(*out, envelope(json{{"path", *path_kind},
                                          {"samples", *samples},
                                          {"mu_from", *mu_from},
                                          {"mu_to", *mu_to},
                                          {"normalized_energy", *normalized}},
                                     result));
            if (pass)
                std::cerr << "count=2 at all " << report.samples.size() << " samples\n";
            else
                std::cerr << "tangent count deviated from 2 (sample " << report.offending
                          << ")\n";
            rc = pass ? 0 : 1;
        });
    }

    // ---- orbit -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("orbit", "Find a symmetric periodic orbit by shooting");
        auto mu = std::make_shared<double>(0.5);
        auto energy = std::make_shared<std::optional<double>>();
        auto normalized = std::make_shared<std::optional<double>>();
        auto guess = std::make_shared<double>(0.8);
        auto direction = std::make_shared<std::string>("retrograde");
        auto samples = std::make_shared<int>(1000);
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in (0,1)")->required();
        cmd->add_option("--energy", *energy, "Energy c");
        cmd->add_option("--normalized-energy", *normalized, "Normalized energy in (0,1)");
        cmd->add_option("--guess", *guess, "Axis position q1 to start the search")->required();
        cmd->add_option("--direction", *direction, "retrograde | direct")
            ->capture_default_str();
        cmd->add_option("--samples", *samples, "CSV sample count over one period")
            ->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, energy, normalized, guess, direction, samples, out] {
            const double c = resolve_energy(*mu, *energy, *normalized);
            const System sys = make_system(MassRatio(*mu));
            const PeriodicOrbit orbit =
                find_symmetric_orbit(sys, c, *guess, parse_direction(*direction));
            if (out->format == "csv") {
                IntegrateOptions io;
                io.tolerance = 1e-12;
                emit(*out, trajectory_csv(integrate(sys, orbit.initial, orbit.period, io),
                                          *samples));
            } else {
                emit_json(*out, envelope(json{{"mu", *mu},
                                              {"energy", c},
                                              {"guess", *guess},
                                              {"direction", *direction}},
                                         json{{"orbit", orbit}}));
            }
            rc = 0;
        });
    }

    // ---- syzygies --------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("syzygies", "Syzygy report for a symmetric periodic "
                                                   "orbit");
        auto mu = std::make_shared<double>(0.5);
        auto energy = std::make_shared<std::optional<double>>();
        auto normalized = std::make_shared<std::optional<double>>();
        auto guess = std::make_shared<double>(0.8);
        auto direction = std::make_shared<std::string>("retrograde");
        auto out = std::make_shared<OutputOptions>();
        cmd->add_option("--mu", *mu, "Mass ratio in (0,1)")->required();
        cmd->add_option("--energy", *energy, "Energy c");
        cmd->add_option("--normalized-energy", *normalized, "Normalized energy in (0,1)");
        cmd->add_option("--guess", *guess, "Axis position q1 to start the search")->required();
        cmd->add_option("--direction", *direction, "retrograde | direct")
            ->capture_default_str();
        add_output_options(cmd, *out, false);
        cmd->callback([&rc, mu, energy, normalized, guess, direction, out] {
            const double c = resolve_energy(*mu, *energy, *normalized);
            const System sys = make_system(MassRatio(*mu));
            const PeriodicOrbit orbit =
                find_symmetric_orbit(sys, c, *guess, parse_direction(*direction));
            const SyzygyReport report = verify_syzygy_theorem(orbit);
            emit_json(*out, envelope(json{{"mu", *mu},
                                          {"energy", c},
                                          {"guess", *guess},
                                          {"direction", *direction}},
                                     json{{"orbit", orbit}, {"syzygies", report}}));
            rc = 0;
        });
    }

    // ---- hill -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("hill", "Hill's lunar problem");
        cmd->require_subcommand(1);

        auto* crit = cmd->add_subcommand("critical", "The two critical points and their value");
        auto crit_out = std::make_shared<OutputOptions>();
        add_output_options(crit, *crit_out, false);
        crit->callback([&rc, crit_out] {
            const auto [plus, minus] = hill_critical_points();
            emit_json(*crit_out,
                      envelope(json::object(),
                               json{{"points", std::vector<CriticalPoint>{plus, minus}},
                                    {"critical_value", hill_critical_value()}}));
            rc = 0;
        });

        auto* oval = cmd->add_subcommand("oval", "Trace the bounded Hill-lunar oval");
        auto oval_energy = std::make_shared<double>(-2.2);
        auto oval_step = std::make_shared<double>(1e-3);
        auto oval_out = std::make_shared<OutputOptions>();
        oval_out->format = "csv";
        oval->add_option("--energy", *oval_energy, "Energy below -3^(4/3)/2")->required();
        oval->add_option("--step", *oval_step, "Predictor step")->capture_default_str();
        add_output_options(oval, *oval_out);
        oval->callback([&rc, oval_energy, oval_step, oval_out] {
            TraceOptions opt;
            opt.step = *oval_step;
            const OvalCurve curve =
                trace_system_oval(hill_lunar(), *oval_energy, ComponentLabel::Bounded, opt);
            if (oval_out->format == "csv")
                emit(*oval_out, vertices_csv(curve.vertices));
            else
                emit_json(*oval_out, envelope(json{{"energy", *oval_energy}},
                                              json{{"oval", curve}}));
            rc = 0;
        });

        auto* chk = cmd->add_subcommand("check", "Verify the bounded oval stays inside the "
                                                 "ball of radius 3^(-1/3)");
        auto chk_energy = std::make_shared<double>(-2.2);
        auto chk_out = std::make_shared<OutputOptions>();
        chk->add_option("--energy", *chk_energy, "Energy below -3^(4/3)/2")->required();
        add_output_options(chk, *chk_out, false);
        chk->callback([&rc, chk_energy, chk_out] {
            const HillRegionCheck check = hill_bounded_region_check(*chk_energy);
            emit_json(*chk_out, envelope(json{{"energy", *chk_energy}},
                                         json{{"check", check}}));
            rc = check.inside ? 0 : 1;
        });

        auto* orb = cmd->add_subcommand("orbit", "Symmetric periodic orbit of Hill's problem "
                                                 "with syzygy and quadrature counts");
        auto orb_energy = std::make_shared<double>(-2.2);
        auto orb_guess = std::make_shared<double>(0.3);
        auto orb_direction = std::make_shared<std::string>("retrograde");
        auto orb_out = std::make_shared<OutputOptions>();
        orb->add_option("--energy", *orb_energy, "Energy c")->required();
        orb->add_option("--guess", *orb_guess, "Axis position q1 to start the search")
            ->required();
        orb->add_option("--direction", *orb_direction, "retrograde | direct")
            ->capture_default_str();
        add_output_options(orb, *orb_out, false);
        orb->callback([&rc, orb_energy, orb_guess, orb_direction, orb_out] {
            const System sys = hill_lunar();
            const PeriodicOrbit orbit = find_symmetric_orbit(sys, *orb_energy, *orb_guess,
                                                             parse_direction(*orb_direction));
            const SyzygyReport report = verify_syzygy_theorem(orbit);
            const int quadratures = crossing_count(orbit, Axis::Q1Zero);
            emit_json(*orb_out, envelope(json{{"energy", *orb_energy},
                                              {"guess", *orb_guess},
                                              {"direction", *orb_direction}},
                                         json{{"orbit", orbit},
                                              {"syzygies", report},
                                              {"quadratures", quadratures}}));
            rc = 0;
        });
    }

    // ---- vq1-zeros -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("vq1-zeros", "Trace the zero set of V_q1 inside a clip "
                                                    "window");
        auto mu = std::make_shared<double>(0.5);
        auto window = std::make_shared<double>(1.5);
        auto step = std::make_shared<double>(1e-3);
        auto out = std::make_shared<OutputOptions>();
        out->format = "csv";
        cmd->add_option("--mu", *mu, "Mass ratio in [0,1]")->required();
        cmd->add_option("--window", *window, "Half-size of the square clip window")
            ->capture_default_str();
        cmd->add_option("--step", *step, "Predictor step")->capture_default_str();
        add_output_options(cmd, *out);
        cmd->callback([&rc, mu, window, step, out] {
            Box2 box(Vec2(-*window, -*window), Vec2(*window, *window));
            TraceOptions opt;
            opt.step = *step;
            const auto curves = trace_Vq1_zero(*mu, box, opt);
            if (out->format == "csv")
                emit(*out, curves_csv(curves));
            else {
                json arr = json::array();
                for (const LevelCurve& c : curves) {
                    json vertices = json::array();
                    for (const Vec2& v : c.vertices) vertices.push_back(v);
                    arr.push_back(json{{"closed", c.closed}, {"vertices", std::move(vertices)}});
                }
                emit_json(*out, envelope(json{{"mu", *mu}, {"window", *window}},
                                         json{{"curves", std::move(arr)}}));
            }
            rc = 0;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tbp::VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
