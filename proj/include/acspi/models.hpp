#pragma once

#include <cmath>
#include <stdexcept>

#include "acspi/ladder_algebra.hpp"
#include "acspi/params.hpp"

namespace acspi {

// Potential V(Q, t) = static(Q) + S sin(omega t) Q, the drive term present
// only when active.  Values are immutable once constructed.
struct PotentialSpec {
    PositionPolynomial static_part;
    double drive_amplitude = 0.0;
    double drive_frequency = 0.0;
    bool drive_active = false;
};

// Quartic double well (m omega0^2 / (8 Q0^2)) (Q^2 - Q0^2)^2 with an optional
// linear sinusoidal drive.  Minima sit at +/- Q0, the barrier top at Q = 0.
inline PotentialSpec double_well(const PhysicalParams& params, double Q0, double S, double omega) {
    if (!(Q0 > 0.0)) throw std::invalid_argument("double_well: Q0 must be > 0");
    const double pref = params.mass * params.omega0 * params.omega0 / (8.0 * Q0 * Q0);
    PositionPolynomial v;
    v += PositionPolynomial::monomial(4, Complex(pref, 0.0));
    v += PositionPolynomial::monomial(2, Complex(-2.0 * pref * Q0 * Q0, 0.0));
    v += PositionPolynomial::monomial(0, Complex(pref * Q0 * Q0 * Q0 * Q0, 0.0));
    PotentialSpec spec;
    spec.static_part = v;
    spec.drive_amplitude = S;
    spec.drive_frequency = omega;
    spec.drive_active = S != 0.0;
    return spec;
}

// Pure reference oscillator (m omega0^2 / 2) Q^2.
inline PotentialSpec harmonic(const PhysicalParams& params) {
    PotentialSpec spec;
    spec.static_part =
        PositionPolynomial::monomial(2, Complex(0.5 * params.mass * params.omega0 * params.omega0, 0.0));
    return spec;
}

// Arbitrary static polynomial with an optional drive.
inline PotentialSpec polynomial_potential(PositionPolynomial static_part, double S, double omega) {
    PotentialSpec spec;
    spec.static_part = std::move(static_part);
    spec.drive_amplitude = S;
    spec.drive_frequency = omega;
    spec.drive_active = S != 0.0;
    return spec;
}

// Full potential at time t as a position polynomial.
inline PositionPolynomial potential_at(const PotentialSpec& spec, double t) {
    PositionPolynomial v = spec.static_part;
    if (spec.drive_active && spec.drive_amplitude != 0.0) {
        const double c = spec.drive_amplitude * std::sin(spec.drive_frequency * t);
        v += PositionPolynomial::monomial(1, Complex(c, 0.0));
    }
    return v;
}

// Deviation from the reference oscillator: V(Q, t) - (m omega0^2 / 2) Q^2.
// Cancellation is coefficient-exact, so a pure harmonic spec yields the zero
// polynomial, not a polynomial of small residues.
inline PositionPolynomial anharmonic_part(const PotentialSpec& spec, const PhysicalParams& params,
                                          double t) {
    PositionPolynomial v = potential_at(spec, t);
    v += PositionPolynomial::monomial(
        2, Complex(-0.5 * params.mass * params.omega0 * params.omega0, 0.0));
    return v;
}

}  // namespace acspi
