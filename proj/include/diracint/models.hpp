#pragma once

#include <diracint/model.hpp>

#include <map>
#include <string>

namespace diracint {

/// Identifier plus parameter overrides for a bundled model. Parameters not
/// listed keep their documented defaults; unknown names are rejected.
struct ModelSpec {
    std::string id;  // rolling_disk | heisenberg | oscillator | free_particle
    std::map<std::string, double> params;
};

/// Instantiates a bundled model from its spec.
MechModel make_model(const ModelSpec& spec);

/// Vertical rolling disk on the plane, coordinates (x, y, theta, phi).
/// L = m/2 (vx^2 + vy^2) + I/2 vtheta^2 + J/2 vphi^2 - V with
/// V = -pot_amp * sin(theta); rolling constraints
/// dx - R cos(phi) dtheta and dy - R sin(phi) dtheta. Analytic gradients.
MechModel rolling_disk(double m = 1.0, double I = 0.25, double J = 0.5, double R = 1.0,
                       double pot_amp = 10.0);

/// Classical Heisenberg system, coordinates (x, y, z), L = |v|^2 / 2,
/// single constraint one-form dz - y dx + x dy. Analytic gradients.
MechModel heisenberg();

/// Unconstrained harmonic oscillator, L = |v|^2/2 - omega0^2 |q|^2 / 2.
MechModel oscillator(double omega0, int n = 1);

/// Unconstrained free particle, L = |v|^2 / 2.
MechModel free_particle(int n);

}  // namespace diracint
