#include "smartwalker/admittance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walker {

void LinearAdmittanceParams::validate() const {
  if (!(mass_kg > 0.0)) throw std::invalid_argument("virtual mass must be positive");
  if (damping < 0.0) throw std::invalid_argument("virtual damping must be non-negative");
  if (!(stiffness > 0.0)) throw std::invalid_argument("virtual elasticity must be positive");
}

void AngularAdmittanceParams::validate() const {
  if (!(inertia_kgm2 > 0.0)) throw std::invalid_argument("virtual inertia must be positive");
  if (damping < 0.0) throw std::invalid_argument("angular damping must be non-negative");
  if (!(stiffness > 0.0)) throw std::invalid_argument("angular elasticity must be positive");
}

double clamp_turn_rate(double omega_dps) {
  return std::clamp(omega_dps, -kMaxTurnRateDps, kMaxTurnRateDps);
}

SecondOrderAdmittance::SecondOrderAdmittance(double mass, double damping,
                                             double stiffness, SampleRate rate) {
  if (!(mass > 0.0) || !(stiffness > 0.0) || damping < 0.0 || !(rate.hz > 0.0))
    throw std::invalid_argument("invalid admittance parameters");
  dt_ = rate.dt();

  // H(s) = K0 / (s^2 + a1 s + a0), bilinear substitution s = c (1-z^-1)/(1+z^-1).
  const double k0 = 1.0 / mass;
  const double a1c = damping / mass;
  const double a0c = stiffness / mass;
  const double c = 2.0 / dt_;

  const double d0 = c * c + a1c * c + a0c;
  b0_ = k0 / d0;
  b1_ = 2.0 * k0 / d0;
  b2_ = k0 / d0;
  a1_ = (2.0 * a0c - 2.0 * c * c) / d0;
  a2_ = (c * c - a1c * c + a0c) / d0;
}

double SecondOrderAdmittance::step(double input) {
  if (!std::isfinite(input)) throw std::invalid_argument("invalid input");
  const double y = b0_ * input + s1_;
  s1_ = b1_ * input - a1_ * y + s2_;
  s2_ = b2_ * input - a2_ * y;
  return y;
}

void SecondOrderAdmittance::reset() {
  s1_ = 0.0;
  s2_ = 0.0;
}

ConventionalController::ConventionalController(const LinearAdmittanceParams& lin,
                                               const AngularAdmittanceParams& ang,
                                               SampleRate rate)
    : linear_((lin.validate(), lin.mass_kg), lin.damping, lin.stiffness, rate),
      angular_((ang.validate(), ang.inertia_kgm2), ang.damping, ang.stiffness, rate) {}

VelocityCommand ConventionalController::tick(const HandleWrench& wrench) {
  VelocityCommand cmd;
  cmd.v_mps = linear_.step(wrench.fx_n);
  cmd.omega_dps = clamp_turn_rate(angular_.step(wrench.tauz_nm) * kDegPerRad);
  return cmd;
}

void ConventionalController::reset() {
  linear_.reset();
  angular_.reset();
}

}  // namespace walker
