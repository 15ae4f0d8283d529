#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace shockline {

/// Isentropic polytrope normalized to rho0 = 1, eta0 = 1, h0 = 0:
/// p = rho^gamma / gamma, eta^2 = rho^(gamma-1), h = (eta^2 - 1)/(gamma - 1).
struct PolytropicEos {
  double gamma = 1.4;

  PolytropicEos() = default;
  explicit PolytropicEos(double g) : gamma(g) {
    if (!(g > 1.0)) throw std::invalid_argument("adiabatic exponent must exceed 1");
  }

  double pressure(double rho) const { return std::pow(rho, gamma) / gamma; }
  double sound_speed_sq(double rho) const { return std::pow(rho, gamma - 1.0); }
  double sound_speed(double rho) const { return std::sqrt(sound_speed_sq(rho)); }
  double enthalpy(double rho) const { return std::expm1((gamma - 1.0) * std::log(rho)) / (gamma - 1.0); }

  /// eta^2 = 1 + (gamma - 1) h.
  double sound_speed_sq_from_enthalpy(double h) const { return 1.0 + (gamma - 1.0) * h; }

  double density_from_enthalpy(double h) const {
    const double base = sound_speed_sq_from_enthalpy(h);
    if (!(base > 0.0)) {
      throw std::domain_error("enthalpy " + std::to_string(h) + " lies at or below vacuum");
    }
    return std::pow(base, 1.0 / (gamma - 1.0));
  }

  /// H = -2h - eta^2, hence dH/dh = -(gamma + 1).
  double dH_dh() const { return -(gamma + 1.0); }
};

}  // namespace shockline
