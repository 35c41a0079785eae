#pragma once

// Critical points of the effective potential: the five Lagrange points of
// the PCR3BP with their Morse indices and ordered critical energies, and
// the two critical points of Hill's lunar problem.

#include <array>
#include <utility>
#include <vector>

#include "tbp/systems.hpp"
#include "tbp/types.hpp"

namespace tbp {

enum class CriticalLabel { L1, L2, L3, L4, L5, HillPlus, HillMinus };

const char* to_string(CriticalLabel label);

struct CriticalPoint {
    Vec2 location = Vec2::Zero();
    double value = 0.0;   // effective potential (= Hamiltonian at rest)
    int morse_index = 0;  // negative eigenvalues of hess_V at the location
    CriticalLabel label = CriticalLabel::L1;
};

/// Critical energies h1 < h2, h3 < h45. For mu < 1/2 the sun is the heavier
/// primary and h2 < h3; the two coincide exactly at mu = 1/2.
struct CriticalEnergies {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
    double h45 = 0.0;

    /// Critical energy on the far side of the lighter primary (min of h2,h3).
    double light() const { return h2 < h3 ? h2 : h3; }
    /// Critical energy on the far side of the heavier primary (max of h2,h3).
    double heavy() const { return h2 < h3 ? h3 : h2; }
};

/// Restriction u of the effective potential to the q1-axis with its first
/// two derivatives; u'' < 0 everywhere (u is strictly concave per interval).
struct RestrictedPotential {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

RestrictedPotential restricted_potential(MassRatio mu, double x);

/// The triangular points l4 = (1/2 - mu, sqrt(3)/2) and its mirror l5, both
/// with value (mu(1-mu) - 3)/2 and Morse index 2.
std::pair<CriticalPoint, CriticalPoint> triangular_points(MassRatio mu);

/// The collinear points {L1, L2, L3}, located by bracketed bisection of u'
/// in (-mu, 1-mu), (1-mu, inf) and (-inf, -mu) respectively, to |u'| < 1e-12.
std::array<CriticalPoint, 3> collinear_points(MassRatio mu);

CriticalEnergies critical_energies(MassRatio mu);

/// All five Lagrange points in label order L1..L5.
std::vector<CriticalPoint> lagrange_points(MassRatio mu);

/// Hill's lunar problem: critical points (+-3^(-1/3), 0), both with value
/// -3^(4/3)/2.
std::pair<CriticalPoint, CriticalPoint> hill_critical_points();

double hill_critical_value();

/// Critical value of the rotating-Kepler limit (attained on the unit circle).
double rotating_kepler_critical_value();

/// Number of eigenvalues of hess_V below -1e-9 at the given location.
int morse_index(const System& sys, const Vec2& location);

} // namespace tbp
