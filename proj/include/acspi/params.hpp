#pragma once

#include <cmath>
#include <stdexcept>

namespace acspi {

// Reference-oscillator constants.  lambda is the coefficient in
// Q = lambda * (a + a^dag); it is derived, never set directly.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    double omega0 = 1.0;
    double lambda = 0.0;

    PhysicalParams() : PhysicalParams(1.0, 1.0, 1.0) {}

    PhysicalParams(double hbar_, double mass_, double omega0_)
        : hbar(hbar_), mass(mass_), omega0(omega0_) {
        if (!(hbar > 0.0) || !(mass > 0.0) || !(omega0 > 0.0)) {
            throw std::invalid_argument("PhysicalParams: hbar, mass, omega0 must be > 0");
        }
        lambda = std::sqrt(hbar / (2.0 * mass * omega0));
    }
};

}  // namespace acspi
