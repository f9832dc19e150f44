#pragma once

#include <utility>

#include "smartwalker/signals.hpp"

namespace walker {

/// Virtual mass-damper-spring mapping forward handle force to linear velocity.
struct LinearAdmittanceParams {
  double mass_kg = 10.0;
  double damping = 25.0;    // N*s/m
  double stiffness = 10.0;  // N/m

  void validate() const;
};

/// Virtual inertia-damper-spring mapping handle torque to angular velocity.
struct AngularAdmittanceParams {
  double inertia_kgm2 = 5.0;
  double damping = 12.0;   // N*m*s/rad
  double stiffness = 6.0;  // N*m/rad

  void validate() const;
};

/// Force/torque sample from the handle sensor. tau_z is the net sensed torque
/// about the sensor z-axis; positive commands a left (CCW) turn.
struct HandleWrench {
  double fx_n = 0.0;
  double tauz_nm = 0.0;
};

/// Shared output of both controllers. omega is CCW-positive in deg/s and is
/// saturated to the walker's steering range.
struct VelocityCommand {
  double v_mps = 0.0;
  double omega_dps = 0.0;
};

inline constexpr double kMaxTurnRateDps = 90.0;

inline constexpr double kDegPerRad = 57.29577951308232;

double clamp_turn_rate(double omega_dps);

/// Discrete realization of 1/(m s^2 + b s + k) via the bilinear (trapezoidal)
/// transform at a fixed tick rate. Direct form II transposed, two state
/// scalars. DC gain is exactly 1/k.
class SecondOrderAdmittance {
 public:
  SecondOrderAdmittance(double mass, double damping, double stiffness, SampleRate rate);

  /// Advances one tick; returns the output. Throws on non-finite input.
  double step(double input);

  void reset();
  double dt() const { return dt_; }
  std::pair<double, double> state() const { return {s1_, s2_}; }

 private:
  double b0_, b1_, b2_;  // numerator taps
  double a1_, a2_;       // denominator taps (monic)
  double s1_ = 0.0, s2_ = 0.0;
  double dt_;
};

/// The conventional controller: independent force->v and torque->omega
/// admittance channels.
class ConventionalController {
 public:
  ConventionalController(const LinearAdmittanceParams& lin,
                         const AngularAdmittanceParams& ang, SampleRate rate);

  VelocityCommand tick(const HandleWrench& wrench);
  void reset();

 private:
  SecondOrderAdmittance linear_;
  SecondOrderAdmittance angular_;
};

}  // namespace walker
