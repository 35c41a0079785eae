#include "tbp/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "tbp/errors.hpp"

namespace tbp {

namespace {

constexpr double kOnAxisTol = 1e-8;
constexpr double kInflexionMargin = 1e-6;

struct WTerms {
    double mu;
    Vec2 earth;
    Vec2 sun;
};

WTerms w_terms(double mu) {
    if (!(mu >= 0.0 && mu <= 1.0))
        throw DegenerateMassError("W_mu requires mu in [0,1]");
    return {mu, Vec2(1.0 - mu, 0.0), Vec2(-mu, 0.0)};
}

// V_q2 along an oval, evaluated through the oval's own system so the same
// counting code serves the PCR3BP, its limits and Hill's problem.
double vq2(const System& sys, const Vec2& q) { return grad_V(sys, q).y(); }

Vec2 lerp(const Vec2& a, const Vec2& b, double t) { return a + t * (b - a); }

} // namespace

double eval_W(double mu, const Vec2& q) {
    const WTerms w = w_terms(mu);
    double sum = -1.0;
    if (w.mu > 0.0) {
        const double de = (q - w.earth).norm();
        if (de <= kSingularityGuard) throw SingularityError("W evaluated at the earth primary");
        sum += w.mu / (de * de * de);
    }
    if (w.mu < 1.0) {
        const double ds = (q - w.sun).norm();
        if (ds <= kSingularityGuard) throw SingularityError("W evaluated at the sun primary");
        sum += (1.0 - w.mu) / (ds * ds * ds);
    }
    return sum;
}

Vec2 grad_W(double mu, const Vec2& q) {
    const WTerms w = w_terms(mu);
    Vec2 g = Vec2::Zero();
    if (w.mu > 0.0) {
        const Vec2 re = q - w.earth;
        const double de = re.norm();
        if (de <= kSingularityGuard) throw SingularityError("W evaluated at the earth primary");
        g -= 3.0 * w.mu * re / std::pow(de, 5);
    }
    if (w.mu < 1.0) {
        const Vec2 rs = q - w.sun;
        const double ds = rs.norm();
        if (ds <= kSingularityGuard) throw SingularityError("W evaluated at the sun primary");
        g -= 3.0 * (1.0 - w.mu) * rs / std::pow(ds, 5);
    }
    return g;
}

LevelCurve trace_W_zero(double mu, const TraceOptions& opt) {
    const WTerms w = w_terms(mu);
    // Between the primaries W > 0; it falls to -1 at infinity, so the first
    // crossing to the right of the earth position seeds the curve.
    auto f = [mu](const Vec2& q) { return eval_W(mu, q); };
    auto g = [mu](const Vec2& q) { return grad_W(mu, q); };

    const double x0 = 0.5 - mu;
    double xa = x0;
    double fa = f(Vec2(xa, 0.0));
    std::optional<double> seed_x;
    for (int k = 1; k <= 4000; ++k) {
        const double xb = x0 + k * 1e-3;
        if (w.mu > 0.0 && std::abs(xb - w.earth.x()) < 1e-9) continue;
        const double fb = f(Vec2(xb, 0.0));
        if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0)) {
            double lo = xa, hi = xb, flo = fa;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(Vec2(mid, 0.0));
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            seed_x = 0.5 * (lo + hi);
            break;
        }
        xa = xb;
        fa = fb;
    }
    if (!seed_x) throw SeedNotFoundError("no W = 0 crossing found on the scan ray");

    LevelCurve curve = trace_level_curve(f, g, 0.0, Vec2(*seed_x, 0.0), opt);
    for (const Vec2& v : curve.vertices)
        if (grad_W(mu, v).norm() <= kInflexionMargin)
            throw VerificationError("grad W vanishes on the traced W-zero curve; 0 should be a "
                                    "regular value");
    return curve;
}

TangentReport vertical_tangents(const OvalCurve& oval) {
    if (!oval.closed || oval.vertices.size() < 4)
        throw NonClosedCurveError("vertical_tangents requires a closed oval");

    const System& sys = oval.system;
    const size_t n = oval.vertices.size() - 1;  // unique vertices; last repeats first
    std::vector<double> g(n);
    for (size_t i = 0; i < n; ++i) g[i] = vq2(sys, oval.vertices[i]);

    TangentReport rep;
    for (size_t i = 0; i < n; ++i) {
        const size_t j = (i + 1) % n;
        if (g[i] == 0.0) {
            const size_t prev = (i + n - 1) % n;
            if (g[prev] != 0.0) rep.locations.push_back(oval.vertices[i]);
            continue;
        }
        if (g[i] * g[j] < 0.0) {
            const Vec2& a = oval.vertices[i];
            const Vec2& b = oval.vertices[j];
            double lo = 0.0, hi = 1.0;
            double flo = g[i];
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double fm = vq2(sys, lerp(a, b, mid));
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
            rep.locations.push_back(lerp(a, b, 0.5 * (lo + hi)));
        }
    }
    rep.count = static_cast<int>(rep.locations.size());
    rep.on_axis.reserve(rep.locations.size());
    for (const Vec2& p : rep.locations) rep.on_axis.push_back(std::abs(p.y()) < kOnAxisTol);
    return rep;
}

ParameterPath make_parameter_path(double mu0, double n0, double mu1, double n1, int samples) {
    if (samples < 1) throw Error("parameter path needs at least one sample");
    ParameterPath path;
    path.resolution = samples;
    path.samples.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        const double mu = mu0 + t * (mu1 - mu0);
        const double nn = n0 + t * (n1 - n0);
        const CriticalEnergies e = critical_energies(MassRatio(mu));
        path.samples.emplace_back(mu, e.h1 + nn * (e.light() - e.h1));
    }
    return path;
}

void validate_path(const ParameterPath& path) {
    if (path.samples.empty()) throw PathInvariantError("empty parameter path");
    for (size_t i = 0; i < path.samples.size(); ++i) {
        const auto [mu, c] = path.samples[i];
        if (!(mu > 0.0 && mu < 1.0))
            throw PathInvariantError("path sample has degenerate mass ratio");
        const CriticalEnergies e = critical_energies(MassRatio(mu));
        if (!(c > e.h1 && c < e.light()))
            throw PathInvariantError("path sample energy not strictly between the first and "
                                     "second critical values");
        if (i > 0) {
            const auto [pmu, pc] = path.samples[i - 1];
            if (std::abs(mu - pmu) >= path.step_bound || std::abs(c - pc) >= path.step_bound)
                throw PathInvariantError("consecutive path samples differ by more than the step "
                                         "bound");
        }
    }
}

namespace {

// Certified minimum of V over the first-quadrant unit-circle arc: cell
// minima from the corners padded by 1.5 x the corner gradient maximum.
double certified_arc_min(const System& sys, double grid_step) {
    const double quarter = std::numbers::pi / 2.0;
    const int n = static_cast<int>(std::ceil(quarter / grid_step));
    double vmin = std::numeric_limits<double>::infinity();
    double v_prev = 0.0, g_prev = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double theta = std::min(quarter, i * grid_step);
        const Vec2 q(std::cos(theta), std::sin(theta));
        const double v = effective_potential(sys, q);
        const double gn = grad_V(sys, q).norm();
        if (i > 0) {
            const double pad = 1.5 * std::max(gn, g_prev) * grid_step / 2.0;
            vmin = std::min(vmin, std::min(v, v_prev) - pad);
        }
        v_prev = v;
        g_prev = gn;
    }
    return vmin;
}

// Certified minimum of V over {q1 >= 0, q2 >= 2/3, |q| <= 1}; cells whose
// corners all lie outside the unit disc are skipped.
double certified_lid_min(const System& sys, double grid_step) {
    const double y0 = 2.0 / 3.0;
    const int nx = static_cast<int>(std::ceil(1.0 / grid_step));
    const int ny = static_cast<int>(std::ceil((1.0 - y0) / grid_step));
    const double half_diag = grid_step * std::numbers::sqrt2 / 2.0;

    std::vector<double> v_row(nx + 1), g_row(nx + 1), v_next(nx + 1), g_next(nx + 1);
    auto fill_row = [&](double y, std::vector<double>& vv, std::vector<double>& gg) {
        for (int i = 0; i <= nx; ++i) {
            const Vec2 q(std::min(1.0, i * grid_step), y);
            vv[i] = effective_potential(sys, q);
            gg[i] = grad_V(sys, q).norm();
        }
    };

    double vmin = std::numeric_limits<double>::infinity();
    fill_row(y0, v_row, g_row);
    for (int j = 0; j < ny; ++j) {
        const double ya = std::min(1.0, y0 + j * grid_step);
        const double yb = std::min(1.0, y0 + (j + 1) * grid_step);
        fill_row(yb, v_next, g_next);
        for (int i = 0; i < nx; ++i) {
            const double xa = std::min(1.0, i * grid_step);
            // cell entirely outside the unit disc: nearest corner decides
            if (xa * xa + ya * ya > 1.0) continue;
            const double corner_min = std::min(std::min(v_row[i], v_row[i + 1]),
                                               std::min(v_next[i], v_next[i + 1]));
            const double corner_grad = std::max(std::max(g_row[i], g_row[i + 1]),
                                                std::max(g_next[i], g_next[i + 1]));
            vmin = std::min(vmin, corner_min - 1.5 * corner_grad * half_diag);
        }
        v_row.swap(v_next);
        g_row.swap(g_next);
    }
    return vmin;
}

// The zero-set quantity S(q) = 1/(2|q-e|^3) + 1/(2|q-s|^3) over
// {q1 >= 0, 0 <= q2 <= 2/3, |q| <= 1}. Cells near a primary are certified by
// the exact distance-monotone bound S >= 1/(2 max|q-e|^3) + 1/(2 max|q-s|^3)
// (the max over a rectangle is attained at a corner); away from the
// primaries the corner-gradient Lipschitz padding is used.
double certified_zero_set_min(const System& sys, double grid_step) {
    const double y1 = 2.0 / 3.0;
    const int nx = static_cast<int>(std::ceil(1.0 / grid_step));
    const int ny = static_cast<int>(std::ceil(y1 / grid_step));
    const double half_diag = grid_step * std::numbers::sqrt2 / 2.0;

    auto s_val = [&](const Vec2& q) {
        const double de = (q - sys.earth).norm();
        const double ds = (q - sys.sun).norm();
        return 0.5 / (de * de * de) + 0.5 / (ds * ds * ds);
    };
    auto s_grad_norm = [&](const Vec2& q) {
        const Vec2 re = q - sys.earth;
        const Vec2 rs = q - sys.sun;
        const Vec2 g = -1.5 * re / std::pow(re.norm(), 5) - 1.5 * rs / std::pow(rs.norm(), 5);
        return g.norm();
    };

    double smin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ny; ++j) {
        const double ya = std::min(y1, j * grid_step);
        const double yb = std::min(y1, (j + 1) * grid_step);
        for (int i = 0; i < nx; ++i) {
            const double xa = std::min(1.0, i * grid_step);
            const double xb = std::min(1.0, (i + 1) * grid_step);
            if (xa * xa + ya * ya > 1.0) continue;
            const Vec2 corners[4] = {Vec2(xa, ya), Vec2(xb, ya), Vec2(xa, yb), Vec2(xb, yb)};
            double de_max = 0.0, ds_max = 0.0, de_min = 1e300, ds_min = 1e300;
            for (const Vec2& q : corners) {
                de_max = std::max(de_max, (q - sys.earth).norm());
                ds_max = std::max(ds_max, (q - sys.sun).norm());
                de_min = std::min(de_min, (q - sys.earth).norm());
                ds_min = std::min(ds_min, (q - sys.sun).norm());
            }
            double cell_min;
            if (de_min < 0.05 || ds_min < 0.05) {
                cell_min = 0.5 / std::pow(de_max, 3) + 0.5 / std::pow(ds_max, 3);
            } else {
                double corner_min = 1e300, corner_grad = 0.0;
                for (const Vec2& q : corners) {
                    corner_min = std::min(corner_min, s_val(q));
                    corner_grad = std::max(corner_grad, s_grad_norm(q));
                }
                cell_min = corner_min - 1.5 * corner_grad * half_diag;
            }
            smin = std::min(smin, cell_min);
        }
    }
    return smin;
}

bool bounded_oval_fits(const System& sys, double epsilon, const TraceOptions& opt) {
    const OvalCurve oval =
        trace_system_oval(sys, -2.0 + epsilon, ComponentLabel::Bounded, opt);
    for (const Vec2& v : oval.vertices)
        if (v.squaredNorm() >= 1.0 || std::abs(v.y()) >= 2.0 / 3.0) return false;
    return true;
}

} // namespace

BaseCaseCertificate base_case_certificate(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 1e-3))
        throw Error("base-case certificate requires a grid step in (0, 1e-3]");
    const System sys = pcr3bp(MassRatio(0.5));

    BaseCaseCertificate cert;
    cert.grid_step = grid_step;
    cert.arc_bound = -1.0 - 1.0 / std::sqrt(5.0) - 0.5;
    cert.lid_bound = -37.0 / 20.0;
    cert.zero_set_bound = 3416.0 / 3375.0;

    cert.arc_min = certified_arc_min(sys, grid_step);
    cert.lid_min = certified_lid_min(sys, grid_step);
    cert.zero_set_min = certified_zero_set_min(sys, grid_step);

    cert.arc_ok = cert.arc_min >= cert.arc_bound && cert.arc_bound > -2.0;
    cert.lid_ok = cert.lid_min >= cert.lid_bound && cert.lid_bound > -2.0;
    cert.zero_set_ok = cert.zero_set_min >= cert.zero_set_bound && cert.zero_set_bound > 1.0;

    // Concrete epsilon: bisect on the traced-oval fit, then back off by half.
    TraceOptions opt;
    double lo = 1e-3, hi = 0.25;
    if (!bounded_oval_fits(sys, lo, opt))
        throw VerificationError("bounded oval does not fit even at epsilon = 1e-3");
    if (bounded_oval_fits(sys, hi, opt))
        throw VerificationError("bounded oval unexpectedly fits at epsilon = 0.25");
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bounded_oval_fits(sys, mid, opt))
            lo = mid;
        else
            hi = mid;
    }
    cert.epsilon_sup = lo;
    cert.epsilon = 0.5 * lo;
    cert.oval_ok = bounded_oval_fits(sys, cert.epsilon, opt);
    return cert;
}

ContinuationReport continuation_check(const ParameterPath& path, const TraceOptions& opt) {
    validate_path(path);
    ContinuationReport report;
    report.pass = true;
    report.samples.reserve(path.samples.size());
    for (size_t i = 0; i < path.samples.size(); ++i) {
        const auto [mu, c] = path.samples[i];
        const OvalCurve oval = trace_oval(MassRatio(mu), c, ComponentLabel::Bounded, opt);
        const TangentReport tr = vertical_tangents(oval);

        ContinuationSample sample;
        sample.mu = mu;
        sample.c = c;
        sample.tangent_count = tr.count;
        sample.on_axis = tr.all_on_axis();
        sample.min_w_margin = std::numeric_limits<double>::infinity();
        for (const Vec2& p : tr.locations)
            sample.min_w_margin = std::min(sample.min_w_margin, std::abs(eval_W(mu, p)));
        report.samples.push_back(sample);

        const bool ok = sample.tangent_count == 2 && sample.on_axis &&
                        sample.min_w_margin > kInflexionMargin;
        if (!ok && report.pass) {
            report.pass = false;
            report.offending = static_cast<int>(i);
        }
    }
    return report;
}

GridScan W_positive_on_region(double mu, double c, double grid_step) {
    if (!(grid_step > 0.0)) throw Error("grid step must be positive");
    TraceOptions opt;
    const OvalCurve oval = trace_oval(MassRatio(mu), c, ComponentLabel::Bounded, opt);
    Box2 box;
    box.setEmpty();
    for (const Vec2& v : oval.vertices) box.extend(v);

    const System sys = oval.system;
    GridScan scan;
    scan.min_value = std::numeric_limits<double>::infinity();
    const long nx = static_cast<long>(std::floor((box.max().x() - box.min().x()) / grid_step));
    const long ny = static_cast<long>(std::floor((box.max().y() - box.min().y()) / grid_step));
    for (long j = 0; j <= ny; ++j) {
        const double y = box.min().y() + j * grid_step;
        for (long i = 0; i <= nx; ++i) {
            const Vec2 q(box.min().x() + i * grid_step, y);
            if (min_singularity_distance(sys, q) < 1e-9) continue;
            if (effective_potential(sys, q) > c) continue;
            const double w = eval_W(mu, q);
            ++scan.points;
            if (w < scan.min_value) {
                scan.min_value = w;
                scan.argmin = q;
            }
        }
    }
    scan.all_positive = scan.points > 0 && scan.min_value > 0.0;
    return scan;
}

std::vector<LevelCurve> trace_Vq1_zero(double mu, const Box2& window, const TraceOptions& opt) {
    const System sys = make_system(MassRatio(mu));
    auto f = [sys](const Vec2& q) { return grad_V(sys, q).x(); };
    auto g = [sys](const Vec2& q) {
        const Mat2 h = hess_V(sys, q);
        return Vec2(h(0, 0), h(0, 1));
    };

    std::vector<Vec2> seeds;
    if (sys.kind == SystemKind::PCR3BP)
        for (const CriticalPoint& p : lagrange_points(MassRatio(mu)))
            if (window.contains(p.location)) seeds.push_back(p.location);

    // Sign-change scan along horizontal and vertical grid lines.
    const int lines = 41;
    const int samples = 301;
    auto scan = [&](bool horizontal) {
        for (int j = 0; j < lines; ++j) {
            const double b = horizontal
                                 ? window.min().y() + j * (window.max().y() - window.min().y()) /
                                                          (lines - 1)
                                 : window.min().x() + j * (window.max().x() - window.min().x()) /
                                                          (lines - 1);
            double prev_a = 0.0, prev_f = 0.0;
            bool have_prev = false;
            for (int i = 0; i < samples; ++i) {
                const double a = horizontal
                                     ? window.min().x() + i * (window.max().x() -
                                                               window.min().x()) / (samples - 1)
                                     : window.min().y() + i * (window.max().y() -
                                                               window.min().y()) / (samples - 1);
                const Vec2 q = horizontal ? Vec2(a, b) : Vec2(b, a);
                if (min_singularity_distance(sys, q) < 0.05) {
                    have_prev = false;
                    continue;
                }
                const double fv = f(q);
                if (have_prev && (prev_f < 0.0) != (fv < 0.0)) {
                    double lo = prev_a, hi = a, flo = prev_f;
                    for (int k = 0; k < 60; ++k) {
                        const double mid = 0.5 * (lo + hi);
                        const Vec2 qm = horizontal ? Vec2(mid, b) : Vec2(b, mid);
                        const double fm = f(qm);
                        if ((flo < 0.0) == (fm < 0.0)) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    const double root = 0.5 * (lo + hi);
                    seeds.push_back(horizontal ? Vec2(root, b) : Vec2(b, root));
                }
                prev_a = a;
                prev_f = fv;
                have_prev = true;
            }
        }
    };
    scan(true);
    scan(false);

    std::vector<LevelCurve> curves;
    const double dedupe_tol = std::max(3.0 * opt.step, 2e-3);
    TraceOptions branch_opt = opt;
    branch_opt.max_steps = std::min(opt.max_steps, 200000L);
    for (const Vec2& seed : seeds) {
        bool duplicate = false;
        for (const LevelCurve& c : curves)
            if (point_polyline_distance(seed, c.vertices) < dedupe_tol) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;

        TraceOutcome fwd;
        try {
            fwd = trace_level_curve_directed(f, g, 0.0, seed, +1, branch_opt, &window);
        } catch (const SeedNotFoundError&) {
            continue;
        }
        LevelCurve merged;
        if (fwd.termination == TraceTermination::Closed) {
            merged = std::move(fwd.curve);
        } else {
            const TraceOutcome bwd =
                trace_level_curve_directed(f, g, 0.0, seed, -1, branch_opt, &window);
            merged.vertices.assign(bwd.curve.vertices.rbegin(), bwd.curve.vertices.rend());
            merged.vertices.insert(merged.vertices.end(), fwd.curve.vertices.begin() + 1,
                                   fwd.curve.vertices.end());
        }
        if (merged.vertices.size() >= 5) curves.push_back(std::move(merged));
    }
    return curves;
}

} // namespace tbp
