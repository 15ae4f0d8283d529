#pragma once

/**
 * @file riemann_exact.hpp
 * @brief Exact Riemann solution of the planar isentropic system with p = rho^gamma / gamma.
 *
 * The barotropic system has two genuinely nonlinear families and no contact, so a single
 * star state (rho*, u*) separates the left and right waves.
 */

#include <cmath>
#include <stdexcept>

#include "shockline/eos.hpp"
#include "shockline/numerics.hpp"

namespace shockline {

struct RiemannState {
  double rho = 1.0;
  double u = 0.0;
};

class IsentropicRiemann {
 public:
  IsentropicRiemann(RiemannState left, RiemannState right, PolytropicEos eos)
      : L_(left), R_(right), eos_(eos) {
    if (!(left.rho > 0.0 && right.rho > 0.0)) throw std::invalid_argument("Riemann states need rho > 0");
    const double k = 2.0 / (eos_.gamma - 1.0);
    if (k * (eos_.sound_speed(L_.rho) + eos_.sound_speed(R_.rho)) <= R_.u - L_.u) {
      throw std::domain_error("Riemann data generate vacuum");
    }
    auto F = [&](double rs) { return wave(rs, L_) + wave(rs, R_) + (R_.u - L_.u); };
    double hi = std::max(L_.rho, R_.rho);
    while (F(hi) < 0.0) hi *= 2.0;
    const auto res = bisect_root(F, 0.0, hi, 1e-15, 400);
    star_rho_ = res.root;
    star_u_ = 0.5 * (L_.u + R_.u) + 0.5 * (wave(star_rho_, R_) - wave(star_rho_, L_));
  }

  double star_density() const { return star_rho_; }
  double star_velocity() const { return star_u_; }

  /// Self-similar solution at xi = (x - x0) / t.
  RiemannState sample(double xi) const {
    const double gm1 = eos_.gamma - 1.0;
    const double c_star = eos_.sound_speed(star_rho_);
    // Left wave.
    if (star_rho_ > L_.rho) {
      const double s = (star_rho_ * star_u_ - L_.rho * L_.u) / (star_rho_ - L_.rho);
      if (xi < s) return L_;
    } else {
      const double cl = eos_.sound_speed(L_.rho);
      if (xi < L_.u - cl) return L_;
      if (xi < star_u_ - c_star) {
        const double c = gm1 / (eos_.gamma + 1.0) * (L_.u + 2.0 * cl / gm1 - xi);
        return {std::pow(c, 2.0 / gm1), xi + c};
      }
    }
    // Right wave.
    if (star_rho_ > R_.rho) {
      const double s = (star_rho_ * star_u_ - R_.rho * R_.u) / (star_rho_ - R_.rho);
      if (xi > s) return R_;
    } else {
      const double cr = eos_.sound_speed(R_.rho);
      if (xi > R_.u + cr) return R_;
      if (xi > star_u_ + c_star) {
        const double c = gm1 / (eos_.gamma + 1.0) * (xi - R_.u + 2.0 * cr / gm1);
        return {std::pow(c, 2.0 / gm1), xi - c};
      }
    }
    return {star_rho_, star_u_};
  }

 private:
  // Velocity jump across the wave connecting state K to density rs.
  double wave(double rs, const RiemannState& K) const {
    if (rs > K.rho) {
      const double dp = eos_.pressure(rs) - eos_.pressure(K.rho);
      return std::sqrt(dp * (rs - K.rho) / (rs * K.rho));
    }
    return 2.0 / (eos_.gamma - 1.0) * (eos_.sound_speed(rs) - eos_.sound_speed(K.rho));
  }

  RiemannState L_, R_;
  PolytropicEos eos_;
  double star_rho_ = 0.0;
  double star_u_ = 0.0;
};

}  // namespace shockline
