#include "smartwalker/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walker {

namespace {

constexpr double kRadPerDeg = 1.0 / kDegPerRad;
constexpr double kTurnExitToleranceDeg = 5.0;

/// Box-Muller with the spare discarded: a fixed two-draw cost per call keeps
/// the stream alignment independent of noise settings.
double gaussian(std::mt19937_64& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;         // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

double wrap_angle_deg(double a) {
  a = std::fmod(a + 180.0, 360.0);
  if (a <= 0.0) a += 360.0;
  return a - 180.0;
}

WalkerPose plant_step(const WalkerPose& pose, const VelocityCommand& cmd, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double th0 = pose.heading_deg * kRadPerDeg;
  const double w = cmd.omega_dps * kRadPerDeg;
  WalkerPose out = pose;
  if (std::fabs(w) < 1e-9) {
    out.x += cmd.v_mps * std::cos(th0) * dt;
    out.y += cmd.v_mps * std::sin(th0) * dt;
  } else {
    // constant-twist arc over the tick
    const double th1 = th0 + w * dt;
    const double r = cmd.v_mps / w;
    out.x += r * (std::sin(th1) - std::sin(th0));
    out.y -= r * (std::cos(th1) - std::cos(th0));
  }
  out.heading_deg = wrap_angle_deg(pose.heading_deg + cmd.omega_dps * dt);
  return out;
}

std::string_view to_string(ControllerKind k) {
  return k == ControllerKind::kConventional ? "conventional" : "fuzzy";
}

ControllerKind controller_from_string(std::string_view s) {
  if (s == "conventional") return ControllerKind::kConventional;
  if (s == "fuzzy") return ControllerKind::kFuzzy;
  throw std::invalid_argument("unknown controller: " + std::string(s));
}

double UserModelParams::lever_nm() const {
  const double lever = push_force_n * grip_offset_m;
  return mirror ? lever : -lever;
}

void UserModelParams::validate() const {
  if (!(push_force_n >= 0.0)) throw std::invalid_argument("push force must be non-negative");
  if (!(grip_offset_m > 0.0)) throw std::invalid_argument("grip offset must be positive");
  if (!(wrist_torque_limit_nm > 0.0))
    throw std::invalid_argument("wrist torque limit must be positive");
  if (reaction_delay_s < 0.0) throw std::invalid_argument("reaction delay must be non-negative");
  if (!(action_lag_s > 0.0)) throw std::invalid_argument("action lag must be positive");
  if (noise_sigma_force_n < 0.0 || noise_sigma_torque_nm < 0.0 || noise_sigma_angle_deg < 0.0)
    throw std::invalid_argument("noise sigmas must be non-negative");
  if (!(angle_slew_dps > 0.0)) throw std::invalid_argument("angle slew must be positive");
  if (!(heading_gain > 0.0)) throw std::invalid_argument("heading gain must be positive");
  if (!(omega_tolerance_dps > 0.0)) throw std::invalid_argument("omega tolerance must be positive");
  if (!(torque_threshold_delta_nm > 0.0))
    throw std::invalid_argument("torque threshold delta must be positive");
}

ScenarioTracker::ScenarioTracker(const Scenario& scenario, const WalkerPose& start,
                                 double line_gain_deg_per_m, double max_line_correction_deg)
    : scenario_(scenario), line_gain_(line_gain_deg_per_m), max_correction_(max_line_correction_deg) {
  scenario_.validate();
  ideal_heading_deg_ = start.heading_deg;
  begin_segment(start);
}

void ScenarioTracker::begin_segment(const WalkerPose& pose) {
  if (finished()) return;
  distance_m_ = 0.0;
  swept_deg_ = 0.0;
  if (active().kind == SegmentKind::kStraight) {
    anchor_x_ = pose.x;
    anchor_y_ = pose.y;
  }
}

Direction ScenarioTracker::direction() const {
  if (finished()) return Direction::kStraight;
  return active().direction();
}

double ScenarioTracker::speed_target() const {
  if (finished()) return 0.0;
  return active().speed_mps;
}

double ScenarioTracker::omega_ff_dps() const {
  if (finished() || active().kind != SegmentKind::kTurn) return 0.0;
  const double target = active().magnitude;
  if (std::fabs(swept_deg_) >= std::fabs(target)) return 0.0;  // holding for heading catch-up
  return scenario_.turn_rate_dps * (target > 0.0 ? 1.0 : -1.0);
}

double ScenarioTracker::cross_track_m(const WalkerPose& pose) const {
  if (finished() || active().kind != SegmentKind::kStraight) return 0.0;
  const double th = ideal_heading_deg_ * kRadPerDeg;
  const double dx = pose.x - anchor_x_;
  const double dy = pose.y - anchor_y_;
  return -std::sin(th) * dx + std::cos(th) * dy;  // positive = left of the line
}

double ScenarioTracker::heading_ref_deg(const WalkerPose& pose) const {
  if (finished()) return pose.heading_deg;
  if (active().kind == SegmentKind::kStraight) {
    const double correction =
        std::clamp(-line_gain_ * cross_track_m(pose), -max_correction_, max_correction_);
    return wrap_angle_deg(ideal_heading_deg_ + correction);
  }
  return wrap_angle_deg(ideal_heading_deg_ + swept_deg_);
}

double ScenarioTracker::heading_error_deg(const WalkerPose& pose) const {
  return wrap_angle_deg(heading_ref_deg(pose) - pose.heading_deg);
}

void ScenarioTracker::advance(const WalkerPose& pose, double v_mps, double dt) {
  if (finished()) return;
  const Segment& seg = active();
  if (seg.kind == SegmentKind::kStraight) {
    distance_m_ += std::fabs(v_mps) * dt;
    if (distance_m_ >= seg.magnitude) {
      ++index_;
      begin_segment(pose);
    }
    return;
  }
  const double target = seg.magnitude;
  const double sign = target > 0.0 ? 1.0 : -1.0;
  if (std::fabs(swept_deg_) < std::fabs(target)) {
    swept_deg_ += sign * scenario_.turn_rate_dps * dt;
    if (std::fabs(swept_deg_) > std::fabs(target)) swept_deg_ = target;
  }
  if (std::fabs(swept_deg_) >= std::fabs(target)) {
    const double final_heading = wrap_angle_deg(ideal_heading_deg_ + target);
    if (std::fabs(wrap_angle_deg(final_heading - pose.heading_deg)) < kTurnExitToleranceDeg) {
      ideal_heading_deg_ = final_heading;
      ++index_;
      begin_segment(pose);
    }
  }
}

OneHandedUser::OneHandedUser(const UserModelParams& params, ControllerKind kind,
                             const FuzzyInferenceEngine* engine,
                             const AngularAdmittanceParams& angular, SampleRate rate)
    : params_(params),
      kind_(kind),
      engine_(engine),
      angular_(angular),
      dt_(rate.dt()),
      angle_state_deg_(params.angle_means_deg.straight),
      angle_view_(60) {
  params_.validate();
  angular_.validate();
  if (kind_ == ControllerKind::kFuzzy && engine_ == nullptr)
    throw std::invalid_argument("fuzzy user policy needs an inference engine");
  delay_ticks_ = static_cast<std::size_t>(std::llround(params_.reaction_delay_s / dt_));
  decision_queue_.assign(delay_ticks_, 0.0);
}

double OneHandedUser::desired_torque(double omega_des_dps, double angle_sm_deg,
                                     bool& feasible) const {
  feasible = true;
  const double lever = params_.lever_nm();
  if (kind_ == ControllerKind::kConventional) {
    // Invert the angular admittance DC gain and cancel the push lever; going
    // straight therefore costs |lever| continuously.
    return angular_.stiffness * (omega_des_dps * kRadPerDeg) - lever;
  }

  // Fuzzy policy: smallest-magnitude wrist torque whose held net torque puts
  // the inferred turn rate inside the tolerance band.
  const double tol = params_.omega_tolerance_dps;
  const double limit = params_.wrist_torque_limit_nm;
  auto omega_at = [&](double tw) { return engine_->infer(angle_sm_deg, tw + lever); };

  const double w0 = omega_at(0.0);
  if (std::fabs(w0 - omega_des_dps) <= tol) return 0.0;

  if (w0 < omega_des_dps) {
    const double edge = omega_des_dps - tol;
    if (omega_at(limit) < edge) {
      feasible = false;
      return limit;
    }
    double lo = 0.0, hi = limit;
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      (omega_at(mid) >= edge ? hi : lo) = mid;
    }
    return hi;
  }

  const double edge = omega_des_dps + tol;
  if (omega_at(-limit) > edge) {
    feasible = false;
    return -limit;
  }
  double lo = -limit, hi = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (omega_at(mid) <= edge ? lo : hi) = mid;
  }
  return lo;
}

UserOutput OneHandedUser::step(Direction dir, double heading_error_deg, double omega_ff_dps,
                               double v_target_mps, std::mt19937_64& rng) {
  // Shoulder channel: slew the intent mean, then add per-tick noise.
  double target = params_.angle_means_deg.straight;
  if (dir == Direction::kLeft) target = params_.angle_means_deg.left;
  if (dir == Direction::kRight) target = params_.angle_means_deg.right;
  const double max_step = params_.angle_slew_dps * dt_;
  angle_state_deg_ += std::clamp(target - angle_state_deg_, -max_step, max_step);
  const double abduction =
      angle_state_deg_ + gaussian(rng) * params_.noise_sigma_angle_deg;
  const double angle_sm = angle_view_.push(abduction);

  // Torque decision, executed through reaction delay and a first-order lag.
  const double omega_des = omega_ff_dps + params_.heading_gain * heading_error_deg;
  bool feasible = true;
  double decision = desired_torque(omega_des, angle_sm, feasible);
  decision = std::clamp(decision, -params_.wrist_torque_limit_nm, params_.wrist_torque_limit_nm);

  decision_queue_.push_back(decision);
  const double delayed = decision_queue_.front();
  decision_queue_.pop_front();

  const double alpha = 1.0 - std::exp(-dt_ / params_.action_lag_s);
  tau_wrist_ += alpha * (delayed - tau_wrist_);
  tau_wrist_ = std::clamp(tau_wrist_, -params_.wrist_torque_limit_nm,
                          params_.wrist_torque_limit_nm);

  UserOutput out;
  out.tau_wrist_nm = tau_wrist_;
  out.abduction_deg = abduction;
  out.saturated =
      !feasible || std::fabs(tau_wrist_) >= params_.wrist_torque_limit_nm - 1e-12;
  out.wrench.fx_n = linear_stiffness_ * v_target_mps + gaussian(rng) * params_.noise_sigma_force_n;
  out.wrench.tauz_nm = tau_wrist_ + params_.lever_nm() + gaussian(rng) * params_.noise_sigma_torque_nm;
  return out;
}

FuzzyProfile default_sim_profile(const UserModelParams& user) {
  user.validate();
  const double neutral = user.lever_nm();  // relaxed one-handed push torque
  DirectionValues torque;
  torque.right = neutral - user.torque_threshold_delta_nm;
  torque.straight = neutral;
  torque.left = neutral + user.torque_threshold_delta_nm;
  return calibrate_profile(user.angle_means_deg, torque, user.mirror);
}

TrialLog run_trial(const Scenario& scenario, ControllerKind kind, const SimConfig& config,
                   std::uint64_t seed) {
  scenario.validate();
  config.linear.validate();
  config.angular.validate();
  config.user.validate();
  if (!(config.timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");

  const FuzzyProfile profile =
      config.profile ? *config.profile : default_sim_profile(config.user);
  profile.validate();

  std::mt19937_64 rng(seed);
  WalkerPose pose{};
  ScenarioTracker tracker(scenario, pose, config.user.line_gain_deg_per_m,
                          config.user.max_line_correction_deg);
  ConventionalController conventional(config.linear, config.angular, config.rate);
  FuzzyController fuzzy(profile, config.linear, config.rate);
  FuzzyInferenceEngine user_engine(profile);
  OneHandedUser user(config.user, kind, &user_engine, config.angular, config.rate);

  TrialLog log;
  log.scenario = scenario.name;
  log.controller = kind;
  log.seed = seed;
  log.rate = config.rate;
  log.segment_directions.reserve(scenario.segments.size());
  for (const Segment& s : scenario.segments) log.segment_directions.push_back(s.direction());

  const double dt = config.rate.dt();
  const std::size_t max_ticks = tick_count(config.rate, config.timeout_s);

  // User feedforward of the force->speed map; matches the linear admittance
  // DC gain so segment speed targets are met at steady state.
  // (set via the config's linear stiffness)
  for (std::size_t k = 0; k < max_ticks && !tracker.finished(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const int segment = tracker.segment_index();
    const Direction dir = tracker.direction();
    const double heading_error = tracker.heading_error_deg(pose);
    const double omega_ff = tracker.omega_ff_dps();
    const double v_target = tracker.speed_target();

    UserOutput u = user.step(dir, heading_error, omega_ff, v_target, rng);

    VelocityCommand cmd;
    if (kind == ControllerKind::kConventional) {
      cmd = conventional.tick(u.wrench);
    } else {
      ShoulderState shoulder{t, u.abduction_deg, true};
      cmd = fuzzy.tick(t, u.wrench, shoulder);
    }

    pose = plant_step(pose, cmd, dt);
    tracker.advance(pose, cmd.v_mps, dt);

    TrialTick tick;
    tick.t = t;
    tick.pose = pose;
    tick.cmd = cmd;
    tick.wrench = u.wrench;
    tick.tau_wrist_nm = u.tau_wrist_nm;
    tick.abduction_deg = u.abduction_deg;
    tick.segment = segment;
    log.ticks.push_back(tick);
  }
  log.complete = tracker.finished();

  if (!log.ticks.empty()) {
    const double t_end = log.ticks.back().t;
    for (TrialTick& tick : log.ticks) {
      tick.excluded = tick.t < config.exclusion_s - 1e-9 ||
                      tick.t > t_end - config.exclusion_s + 1e-9;
    }
  }
  return log;
}

}  // namespace walker
