#pragma once

// Rotating-frame dynamical systems: the planar circular restricted
// three-body problem (PCR3BP), its rotating-Kepler limits (mu = 0 or 1),
// and Hill's lunar problem.
//
// Conventions used throughout the library:
//  - positions q = (q1, q2) and velocities v are rotating-frame quantities,
//    dimensionless, with the primaries of the PCR3BP fixed at
//    earth = (1-mu, 0) and sun = (-mu, 0);
//  - states carry velocities, not momenta (the equations of motion are
//    stated in velocities); the canonical momenta are p = (v1 - q2, v2 + q1)
//    and both forms of the Hamiltonian are provided;
//  - energies are plain doubles, the value of the autonomous Hamiltonian
//    H = |v|^2/2 + V(q).
//
// The potential-evaluation core is templated on the scalar type and accepts
// arbitrary Eigen 2-vector expressions.

#include <cmath>

#include <Eigen/Dense>

#include "tbp/errors.hpp"
#include "tbp/types.hpp"

namespace tbp {

/// Evaluations closer than this to a primary raise SingularityError instead
/// of returning huge values that would corrupt root finders downstream.
inline constexpr double kSingularityGuard = 1e-12;

/// Normalized mass of the lighter primary, in [0,1]. The endpoint values
/// select the rotating-Kepler limit and are flagged as degenerate.
class MassRatio {
public:
    explicit MassRatio(double mu) : mu_(mu) {
        if (!(mu >= 0.0 && mu <= 1.0))
            throw DegenerateMassError("mass ratio must lie in [0,1], got " + std::to_string(mu));
    }
    double value() const { return mu_; }
    bool degenerate() const { return mu_ == 0.0 || mu_ == 1.0; }

private:
    double mu_;
};

enum class SystemKind { PCR3BP, RotatingKepler, HillLunar };

template <class Scalar>
struct SystemT {
    using Vec = Eigen::Matrix<Scalar, 2, 1>;

    SystemKind kind = SystemKind::PCR3BP;
    Scalar mu = Scalar(0);  // meaningful for PCR3BP only
    Vec earth = Vec::Zero();
    Vec sun = Vec::Zero();

    /// Number of gravitational singularities (2 for PCR3BP, else 1 at origin).
    int singularity_count() const { return kind == SystemKind::PCR3BP ? 2 : 1; }
    Vec singularity(int i) const {
        if (kind == SystemKind::PCR3BP) return i == 0 ? earth : sun;
        return Vec::Zero();
    }
};

using System = SystemT<double>;

inline System pcr3bp(MassRatio mu) {
    if (mu.degenerate())
        throw DegenerateMassError("PCR3BP requires 0 < mu < 1; use rotating_kepler() for the limit");
    System sys;
    sys.kind = SystemKind::PCR3BP;
    sys.mu = mu.value();
    sys.earth = Vec2(1.0 - sys.mu, 0.0);
    sys.sun = Vec2(-sys.mu, 0.0);
    return sys;
}

/// Kepler problem in rotating coordinates, massive primary at the origin.
inline System rotating_kepler() {
    System sys;
    sys.kind = SystemKind::RotatingKepler;
    return sys;
}

inline System hill_lunar() {
    System sys;
    sys.kind = SystemKind::HillLunar;
    return sys;
}

/// PCR3BP for 0 < mu < 1, rotating-Kepler limit for mu in {0,1}.
inline System make_system(MassRatio mu) {
    return mu.degenerate() ? rotating_kepler() : pcr3bp(mu);
}

template <class Scalar>
Scalar min_singularity_distance(const SystemT<Scalar>& sys, const Eigen::Matrix<Scalar, 2, 1>& q) {
    using std::min;
    if (sys.kind == SystemKind::PCR3BP)
        return min((q - sys.earth).norm(), (q - sys.sun).norm());
    return q.norm();
}

namespace detail {

template <class Scalar>
void check_not_singular(const SystemT<Scalar>& sys, const Eigen::Matrix<Scalar, 2, 1>& q) {
    if (min_singularity_distance(sys, q) <= Scalar(kSingularityGuard))
        throw SingularityError("evaluation at a primary singularity");
}

} // namespace detail

/// Effective potential V(q): the momentum-independent part of the rotating
/// frame Hamiltonian (gravity plus centrifugal term).
template <class Derived>
typename Derived::Scalar effective_potential(const SystemT<typename Derived::Scalar>& sys,
                                             const Eigen::MatrixBase<Derived>& q_expr) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, 2, 1>;
    const Vec q = q_expr;
    detail::check_not_singular(sys, q);
    switch (sys.kind) {
        case SystemKind::PCR3BP:
            return -sys.mu / (q - sys.earth).norm() - (Scalar(1) - sys.mu) / (q - sys.sun).norm()
                   - q.squaredNorm() / Scalar(2);
        case SystemKind::RotatingKepler:
            return -Scalar(1) / q.norm() - q.squaredNorm() / Scalar(2);
        case SystemKind::HillLunar:
            return -Scalar(1) / q.norm() - Scalar(3) / Scalar(2) * q.x() * q.x();
    }
    throw UnsupportedSystemError("unknown system kind");
}

/// Birkhoff's alternative potential. Depends only on the distances to the
/// primaries and satisfies Omega(q) = -V(q) + mu(1-mu)/2. PCR3BP only.
template <class Derived>
typename Derived::Scalar alt_potential(const SystemT<typename Derived::Scalar>& sys,
                                       const Eigen::MatrixBase<Derived>& q_expr) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, 2, 1>;
    if (sys.kind != SystemKind::PCR3BP)
        throw UnsupportedSystemError("alt_potential is defined for the PCR3BP only");
    const Vec q = q_expr;
    detail::check_not_singular(sys, q);
    const Scalar de = (q - sys.earth).norm();
    const Scalar ds = (q - sys.sun).norm();
    return ((Scalar(1) - sys.mu) * ds * ds + sys.mu * de * de) / Scalar(2) + sys.mu / de
           + (Scalar(1) - sys.mu) / ds;
}

/// Exact analytic gradient of the effective potential.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> grad_V(const SystemT<typename Derived::Scalar>& sys,
                                                     const Eigen::MatrixBase<Derived>& q_expr) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, 2, 1>;
    const Vec q = q_expr;
    detail::check_not_singular(sys, q);
    auto pull = [](Scalar mass, const Vec& r) -> Vec {
        const Scalar d = r.norm();
        return mass * r / (d * d * d);
    };
    switch (sys.kind) {
        case SystemKind::PCR3BP:
            return pull(sys.mu, q - sys.earth) + pull(Scalar(1) - sys.mu, q - sys.sun) - q;
        case SystemKind::RotatingKepler:
            return pull(Scalar(1), q) - q;
        case SystemKind::HillLunar:
            return pull(Scalar(1), q) + Vec(-Scalar(3) * q.x(), Scalar(0));
    }
    throw UnsupportedSystemError("unknown system kind");
}

/// Exact analytic Hessian of the effective potential.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 2> hess_V(const SystemT<typename Derived::Scalar>& sys,
                                                     const Eigen::MatrixBase<Derived>& q_expr) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, 2, 1>;
    using Mat = Eigen::Matrix<Scalar, 2, 2>;
    const Vec q = q_expr;
    detail::check_not_singular(sys, q);
    auto kepler_hess = [](Scalar mass, const Vec& r) -> Mat {
        const Scalar d2 = r.squaredNorm();
        const Scalar d = std::sqrt(d2);
        const Scalar d3 = d * d2;
        const Scalar d5 = d3 * d2;
        return mass * (Mat::Identity() / d3 - Scalar(3) * (r * r.transpose()) / d5);
    };
    switch (sys.kind) {
        case SystemKind::PCR3BP:
            return kepler_hess(sys.mu, Vec(q - sys.earth))
                   + kepler_hess(Scalar(1) - sys.mu, Vec(q - sys.sun)) - Mat::Identity();
        case SystemKind::RotatingKepler:
            return kepler_hess(Scalar(1), q) - Mat::Identity();
        case SystemKind::HillLunar: {
            Mat h = kepler_hess(Scalar(1), q);
            h(0, 0) -= Scalar(3);
            return h;
        }
    }
    throw UnsupportedSystemError("unknown system kind");
}

template <class Scalar>
struct PhaseStateT {
    using Vec = Eigen::Matrix<Scalar, 2, 1>;
    Vec q = Vec::Zero();
    Vec v = Vec::Zero();
};

using PhaseState = PhaseStateT<double>;

/// Canonical momenta of the rotating-frame Hamiltonian, p = (v1 - q2, v2 + q1).
template <class Scalar>
Eigen::Matrix<Scalar, 2, 1> momenta(const PhaseStateT<Scalar>& s) {
    return {s.v.x() - s.q.y(), s.v.y() + s.q.x()};
}

template <class Scalar>
PhaseStateT<Scalar> state_from_momenta(const Eigen::Matrix<Scalar, 2, 1>& q,
                                       const Eigen::Matrix<Scalar, 2, 1>& p) {
    return {q, {p.x() + q.y(), p.y() - q.x()}};
}

/// Autonomous Hamiltonian H = |v|^2/2 + V(q) in velocity form.
template <class Scalar>
Scalar hamiltonian(const SystemT<Scalar>& sys, const PhaseStateT<Scalar>& s) {
    return s.v.squaredNorm() / Scalar(2) + effective_potential(sys, s.q);
}

/// The same Hamiltonian in its (q,p) form; agrees with hamiltonian() under
/// the momentum conversion.
template <class Scalar>
Scalar hamiltonian_pq(const SystemT<Scalar>& sys, const Eigen::Matrix<Scalar, 2, 1>& q,
                      const Eigen::Matrix<Scalar, 2, 1>& p) {
    const Scalar a = p.x() + q.y();
    const Scalar b = p.y() - q.x();
    return (a * a + b * b) / Scalar(2) + effective_potential(sys, q);
}

/// First-order equations of motion:
///   dq/dt = v,  dv1/dt = 2 v2 - dV/dq1,  dv2/dt = -2 v1 - dV/dq2.
template <class Scalar>
PhaseStateT<Scalar> eom(const SystemT<Scalar>& sys, const PhaseStateT<Scalar>& s) {
    const auto g = grad_V(sys, s.q);
    PhaseStateT<Scalar> d;
    d.q = s.v;
    d.v = {Scalar(2) * s.v.y() - g.x(), -Scalar(2) * s.v.x() - g.y()};
    return d;
}

inline Vec4 pack_state(const PhaseState& s) { return Vec4(s.q.x(), s.q.y(), s.v.x(), s.v.y()); }

inline PhaseState unpack_state(const Vec4& y) { return {{y[0], y[1]}, {y[2], y[3]}}; }

/// Equations of motion on packed states y = (q1, q2, v1, v2).
inline Vec4 eom_packed(const System& sys, const Vec4& y) {
    const auto d = eom(sys, unpack_state(y));
    return pack_state({d.q, d.v});
}

} // namespace tbp
