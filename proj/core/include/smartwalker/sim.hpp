#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "smartwalker/admittance.hpp"
#include "smartwalker/fuzzy.hpp"
#include "smartwalker/scenario.hpp"
#include "smartwalker/signals.hpp"

namespace walker {

/// Planar walker pose; heading is CCW-positive degrees in (-180, 180].
struct WalkerPose {
  double x = 0.0;
  double y = 0.0;
  double heading_deg = 0.0;
};

double wrap_angle_deg(double a);

/// Unicycle plant with ideal velocity tracking. Integrates the commanded
/// constant twist exactly over one tick.
WalkerPose plant_step(const WalkerPose& pose, const VelocityCommand& cmd, double dt);

enum class ControllerKind { kConventional, kFuzzy };

std::string_view to_string(ControllerKind k);
ControllerKind controller_from_string(std::string_view s);

/// Synthetic one-handed user. The single hand pushes the walker forward and
/// its lever arm about the sensor z-axis injects the torque the paper-style
/// controllers have to live with: tau_z = tau_wrist - push_force * grip_offset.
struct UserModelParams {
  double push_force_n = 20.0;
  double grip_offset_m = 0.25;
  double wrist_torque_limit_nm = 10.0;
  double reaction_delay_s = 0.1;
  double action_lag_s = 0.1;  // first-order lag on executing a torque decision
  double noise_sigma_force_n = 1.0;
  double noise_sigma_torque_nm = 0.2;
  double noise_sigma_angle_deg = 1.5;
  DirectionValues angle_means_deg{39.06, 27.17, 20.34};  // left, straight, right
  double angle_slew_dps = 40.0;
  double heading_gain = 1.0;               // proportional heading correction, 1/s
  double line_gain_deg_per_m = 30.0;       // straight-segment line recapture
  double max_line_correction_deg = 20.0;
  double omega_tolerance_dps = 3.0;        // fuzzy minimum-effort search band
  double torque_threshold_delta_nm = 5.0;  // spread of the synthetic calibration
  bool mirror = false;                     // left-handed user

  double lever_nm() const;  // signed lever moment of the forward push
  void validate() const;
};

/// Reference generator walking a Scenario: per-segment heading reference,
/// speed target and completion tracking.
class ScenarioTracker {
 public:
  ScenarioTracker(const Scenario& scenario, const WalkerPose& start,
                  double line_gain_deg_per_m = 30.0, double max_line_correction_deg = 20.0);

  bool finished() const { return index_ >= scenario_.segments.size(); }
  int segment_index() const { return static_cast<int>(index_); }
  Direction direction() const;
  double speed_target() const;
  double omega_ff_dps() const;
  double heading_ref_deg(const WalkerPose& pose) const;
  double heading_error_deg(const WalkerPose& pose) const;
  /// Signed lateral offset from the active straight-segment line (0 in turns).
  double cross_track_m(const WalkerPose& pose) const;

  void advance(const WalkerPose& pose, double v_mps, double dt);

 private:
  const Segment& active() const { return scenario_.segments[index_]; }
  void begin_segment(const WalkerPose& pose);

  Scenario scenario_;
  double line_gain_;
  double max_correction_;
  std::size_t index_ = 0;
  double ideal_heading_deg_ = 0.0;  // cumulative course heading before this segment
  double anchor_x_ = 0.0, anchor_y_ = 0.0;
  double distance_m_ = 0.0;  // straight progress
  double swept_deg_ = 0.0;   // turn progress
};

/// Per-tick outputs of the user model.
struct UserOutput {
  HandleWrench wrench;       // net sensed force/torque (noise included)
  double tau_wrist_nm = 0.0; // torque the wrist actually applied this tick
  double abduction_deg = 0.0;
  bool saturated = false;    // wrist torque limit hit
};

/// Tick-level policy of the synthetic user under either controller.
class OneHandedUser {
 public:
  OneHandedUser(const UserModelParams& params, ControllerKind kind,
                const FuzzyInferenceEngine* engine, const LinearAdmittanceParams& linear,
                const AngularAdmittanceParams& angular, SampleRate rate);

  UserOutput step(Direction dir, double heading_error_deg, double omega_ff_dps,
                  double v_target_mps, std::mt19937_64& rng);

 private:
  double desired_torque(double omega_des_dps, double angle_sm_deg, bool& feasible) const;

  UserModelParams params_;
  ControllerKind kind_;
  const FuzzyInferenceEngine* engine_;
  AngularAdmittanceParams angular_;
  double dt_;
  double linear_stiffness_;  // force feedforward matching the v-channel DC gain
  double angle_state_deg_;
  RollingMean angle_view_;  // the user's running view of the smoothed angle
  std::deque<double> decision_queue_;
  std::size_t delay_ticks_;
  double tau_wrist_ = 0.0;
  bool last_feasible_ = true;
};

struct TrialTick {
  double t = 0.0;
  WalkerPose pose;
  VelocityCommand cmd;
  HandleWrench wrench;
  double tau_wrist_nm = 0.0;
  double abduction_deg = 0.0;
  int segment = 0;
  bool excluded = false;
};

/// Per-tick record of one simulated or replayed trial at a fixed rate.
struct TrialLog {
  std::string scenario;
  ControllerKind controller = ControllerKind::kConventional;
  std::uint64_t seed = 0;
  SampleRate rate{50.0};
  bool complete = true;
  std::vector<Direction> segment_directions;
  std::vector<TrialTick> ticks;
};

std::string trial_log_csv_header();
std::string to_csv(const TrialLog& log);
TrialLog trial_log_from_csv(std::istream& in, std::string_view scenario_name);

struct SimConfig {
  LinearAdmittanceParams linear;
  AngularAdmittanceParams angular;
  UserModelParams user;
  std::optional<FuzzyProfile> profile;  // defaults to default_sim_profile(user)
  SampleRate rate{50.0};
  double timeout_s = 120.0;
  double exclusion_s = 1.0;  // acceleration/deceleration trim at both ends
};

/// Synthetic per-user calibration: angle centers from the model's
/// per-direction means, torque centers spread around the relaxed one-handed
/// push torque.
FuzzyProfile default_sim_profile(const UserModelParams& user);

/// Runs one closed-loop trial at the configured rate until the scenario
/// completes or the timeout hits. Deterministic for a fixed seed.
TrialLog run_trial(const Scenario& scenario, ControllerKind kind, const SimConfig& config,
                   std::uint64_t seed);

}  // namespace walker
