#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they are used to check.

#include <cmath>
#include <functional>
#include <random>

#include "tbp/types.hpp"

namespace oracle {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(const tbp::Vec2&)>;

inline double fd1(const Fn1& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline tbp::Vec2 fd_grad(const Fn2& f, const tbp::Vec2& q, double h = 1e-5) {
    const tbp::Vec2 ex(h, 0.0), ey(0.0, h);
    return {(f(q + ex) - f(q - ex)) / (2.0 * h), (f(q + ey) - f(q - ey)) / (2.0 * h)};
}

inline tbp::Mat2 fd_jacobian(const std::function<tbp::Vec2(const tbp::Vec2&)>& g,
                             const tbp::Vec2& q, double h = 1e-5) {
    const tbp::Vec2 ex(h, 0.0), ey(0.0, h);
    tbp::Mat2 j;
    j.col(0) = (g(q + ex) - g(q - ex)) / (2.0 * h);
    j.col(1) = (g(q + ey) - g(q - ey)) / (2.0 * h);
    return j;
}

// Plain bisection on a sign change; the tests feed it hand-written formulas.
inline double bisect(const Fn1& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Independent copy of the on-axis effective potential of the PCR3BP.
inline double u_axis(double mu, double x) {
    return -mu / std::abs(x - (1.0 - mu)) - (1.0 - mu) / std::abs(x + mu) - 0.5 * x * x;
}

// Independent effective potential (full plane).
inline double potential(double mu, const tbp::Vec2& q) {
    const double de = std::hypot(q.x() - (1.0 - mu), q.y());
    const double ds = std::hypot(q.x() + mu, q.y());
    return -mu / de - (1.0 - mu) / ds - 0.5 * q.squaredNorm();
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240611u);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

// Random point at a safe distance from both PCR3BP primaries.
inline tbp::Vec2 random_point(double mu, double clearance = 0.05, double box = 2.0) {
    for (;;) {
        const tbp::Vec2 q(uniform(-box, box), uniform(-box, box));
        const double de = std::hypot(q.x() - (1.0 - mu), q.y());
        const double ds = std::hypot(q.x() + mu, q.y());
        if (de > clearance && ds > clearance && q.norm() > clearance) return q;
    }
}

} // namespace oracle
