#include "smartwalker/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walker {

double GaussianMF::membership(double x) const {
  const double d = x - center;
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

void LinguisticVariable::validate() const {
  if (terms.empty()) throw std::invalid_argument("linguistic variable has no terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].mf.sigma > 0.0))
      throw std::invalid_argument("membership sigma must be positive: " + name);
    if (i > 0 && !(terms[i].mf.center > terms[i - 1].mf.center))
      throw std::invalid_argument("term centers must be strictly increasing: " + name);
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[i].label == terms[j].label)
        throw std::invalid_argument("duplicate term label: " + terms[i].label);
    }
  }
}

namespace {

constexpr std::string_view kSteerNames[5] = {"sharp_right", "gentle_right", "straight",
                                             "gentle_left", "sharp_left"};
constexpr std::string_view kAngleNames[3] = {"low", "middle", "high"};
constexpr std::string_view kTorqueNames[3] = {"negative", "neutral", "positive"};

SteerTerm negated(SteerTerm s) {
  switch (s) {
    case SteerTerm::kSharpRight: return SteerTerm::kSharpLeft;
    case SteerTerm::kGentleRight: return SteerTerm::kGentleLeft;
    case SteerTerm::kStraight: return SteerTerm::kStraight;
    case SteerTerm::kGentleLeft: return SteerTerm::kGentleRight;
    case SteerTerm::kSharpLeft: return SteerTerm::kSharpRight;
  }
  throw std::logic_error("bad steer term");
}

TorqueTerm flipped(TorqueTerm t) {
  switch (t) {
    case TorqueTerm::kNegative: return TorqueTerm::kPositive;
    case TorqueTerm::kNeutral: return TorqueTerm::kNeutral;
    case TorqueTerm::kPositive: return TorqueTerm::kNegative;
  }
  throw std::logic_error("bad torque term");
}

/// Sigma rule: half the mean absolute distance to adjacent term centers
/// (edge terms use their single neighbor).
std::array<double, 3> sigmas_for_centers(const std::array<double, 3>& c) {
  return {(c[1] - c[0]) / 2.0, ((c[1] - c[0]) + (c[2] - c[1])) / 4.0, (c[2] - c[1]) / 2.0};
}

LinguisticVariable make_three_term_variable(std::string name,
                                            const std::string_view (&labels)[3],
                                            const std::array<double, 3>& centers) {
  const auto sig = sigmas_for_centers(centers);
  LinguisticVariable var;
  var.name = std::move(name);
  for (int i = 0; i < 3; ++i)
    var.terms.push_back({std::string(labels[i]), {centers[i], sig[i]}});
  var.validate();
  return var;
}

LinguisticVariable make_steer_variable() {
  LinguisticVariable var;
  var.name = "steer";
  for (int i = 0; i < 5; ++i)
    var.terms.push_back({std::string(kSteerNames[i]), {kSteerCenters[i], kSteerSigmaDps}});
  var.validate();
  return var;
}

}  // namespace

std::string_view to_string(SteerTerm s) { return kSteerNames[static_cast<int>(s)]; }

SteerTerm steer_term_from_string(std::string_view s) {
  for (int i = 0; i < 5; ++i)
    if (kSteerNames[i] == s) return static_cast<SteerTerm>(i);
  throw std::invalid_argument("unknown steer term: " + std::string(s));
}

std::string_view angle_term_label(AngleTerm a) { return kAngleNames[static_cast<int>(a)]; }
std::string_view torque_term_label(TorqueTerm t) { return kTorqueNames[static_cast<int>(t)]; }

RuleBase default_rule_base() {
  RuleBase rb;
  rb.set(AngleTerm::kLow, TorqueTerm::kNegative, SteerTerm::kSharpRight);
  rb.set(AngleTerm::kLow, TorqueTerm::kNeutral, SteerTerm::kStraight);
  rb.set(AngleTerm::kLow, TorqueTerm::kPositive, SteerTerm::kStraight);
  rb.set(AngleTerm::kMiddle, TorqueTerm::kNegative, SteerTerm::kGentleRight);
  rb.set(AngleTerm::kMiddle, TorqueTerm::kNeutral, SteerTerm::kStraight);
  rb.set(AngleTerm::kMiddle, TorqueTerm::kPositive, SteerTerm::kStraight);
  rb.set(AngleTerm::kHigh, TorqueTerm::kNegative, SteerTerm::kGentleRight);
  rb.set(AngleTerm::kHigh, TorqueTerm::kNeutral, SteerTerm::kGentleLeft);
  rb.set(AngleTerm::kHigh, TorqueTerm::kPositive, SteerTerm::kSharpLeft);
  return rb;
}

RuleBase mirrored(const RuleBase& base) {
  RuleBase out;
  for (int a = 0; a < 3; ++a) {
    for (int t = 0; t < 3; ++t) {
      const auto angle = static_cast<AngleTerm>(a);
      const auto torque = static_cast<TorqueTerm>(t);
      out.set(angle, torque, negated(base.lookup(angle, flipped(torque))));
    }
  }
  return out;
}

void FuzzyProfile::validate() const {
  angle.validate();
  torque.validate();
  steer.validate();
  if (angle.terms.size() != 3 || torque.terms.size() != 3 || steer.terms.size() != 5)
    throw std::invalid_argument("profile term counts must be 3/3/5");
  if (steer.terms.front().mf.center < -kMaxTurnRateDps ||
      steer.terms.back().mf.center > kMaxTurnRateDps)
    throw std::invalid_argument("steer centers outside the output range");
}

FuzzyProfile calibrate_profile(const DirectionValues& angle_means_deg,
                               const DirectionValues& torque_thresholds_nm, bool mirror) {
  const auto& a = angle_means_deg;
  const auto& q = torque_thresholds_nm;

  std::array<double, 3> angle_centers;
  if (!mirror) {
    if (!(a.right < a.straight && a.straight < a.left))
      throw std::invalid_argument(
          "calibration error: angle means must satisfy right < straight < left");
    angle_centers = {a.right, a.straight, a.left};
  } else {
    if (!(a.left < a.straight && a.straight < a.right))
      throw std::invalid_argument(
          "calibration error: mirrored angle means must satisfy left < straight < right");
    angle_centers = {a.left, a.straight, a.right};
  }

  // Positive torque commands a left turn on either side, so the threshold
  // ordering is handedness-independent.
  if (!(q.right < q.straight && q.straight < q.left))
    throw std::invalid_argument(
        "calibration error: torque thresholds must satisfy right < straight < left");
  const std::array<double, 3> torque_centers = {q.right, q.straight, q.left};

  FuzzyProfile profile;
  profile.angle = make_three_term_variable("abduction_angle", kAngleNames, angle_centers);
  profile.torque = make_three_term_variable("handle_torque", kTorqueNames, torque_centers);
  profile.steer = make_steer_variable();
  profile.rules = mirror ? mirrored(default_rule_base()) : default_rule_base();
  profile.mirror = mirror;
  profile.validate();
  return profile;
}

FuzzyInferenceEngine::FuzzyInferenceEngine(const FuzzyProfile& profile) : profile_(profile) {
  profile_.validate();
  const double lo = -kMaxTurnRateDps;
  const double hi = kMaxTurnRateDps;
  const std::size_t n = static_cast<std::size_t>(std::llround((hi - lo) / kDefuzzStepDps)) + 1;
  grid_.resize(n);
  for (std::size_t i = 0; i < n; ++i) grid_[i] = lo + static_cast<double>(i) * kDefuzzStepDps;
  for (int k = 0; k < 5; ++k) {
    curves_[k].resize(n);
    const GaussianMF& mf = profile_.steer.terms[k].mf;
    for (std::size_t i = 0; i < n; ++i) curves_[k][i] = mf.membership(grid_[i]);
  }
}

double FuzzyInferenceEngine::infer(double angle_deg, double torque_nm) const {
  if (!std::isfinite(angle_deg) || !std::isfinite(torque_nm))
    throw std::invalid_argument("invalid input");

  double mu_angle[3], mu_torque[3];
  for (int i = 0; i < 3; ++i) {
    mu_angle[i] = profile_.angle.terms[i].mf.membership(angle_deg);
    mu_torque[i] = profile_.torque.terms[i].mf.membership(torque_nm);
  }

  // Rule strength = min of the antecedent memberships; per output term keep
  // the max strength across rules (max aggregation of clipped sets).
  double strength[5] = {0, 0, 0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    for (int t = 0; t < 3; ++t) {
      const auto out = static_cast<int>(
          profile_.rules.lookup(static_cast<AngleTerm>(a), static_cast<TorqueTerm>(t)));
      const double s = std::min(mu_angle[a], mu_torque[t]);
      strength[out] = std::max(strength[out], s);
    }
  }

  // Centroid of the aggregated membership, trapezoidal weights on the grid.
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = grid_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (int k = 0; k < 5; ++k) mu = std::max(mu, std::min(strength[k], curves_[k][i]));
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    num += w * mu * grid_[i];
    den += w * mu;
  }
  if (!(den > 0.0)) return 0.0;
  return clamp_turn_rate(num / den);
}

double infer_omega(const FuzzyProfile& profile, double angle_deg, double torque_nm) {
  return FuzzyInferenceEngine(profile).infer(angle_deg, torque_nm);
}

FuzzyController::FuzzyController(const FuzzyProfile& profile, const LinearAdmittanceParams& lin,
                                 SampleRate rate, std::size_t smoothing_window,
                                 DropoutPolicy dropout)
    : engine_(profile),
      linear_((lin.validate(), lin.mass_kg), lin.damping, lin.stiffness, rate),
      torque_mean_(smoothing_window),
      angle_mean_(smoothing_window),
      dropout_(dropout) {}

double FuzzyController::bridged_angle(double t, const ShoulderState& shoulder) {
  const double straight_center = engine_.profile().angle.terms[1].mf.center;
  if (shoulder.valid) {
    last_valid_t_ = shoulder.t;
    last_valid_angle_ = shoulder.abduction_deg;
    has_valid_ = true;
    return shoulder.abduction_deg;
  }
  if (!has_valid_) return straight_center;
  const double age = t - last_valid_t_;
  if (age <= dropout_.hold_s) return last_valid_angle_;
  const double alpha = std::exp(-(age - dropout_.hold_s) / dropout_.decay_tau_s);
  return straight_center + (last_valid_angle_ - straight_center) * alpha;
}

VelocityCommand FuzzyController::tick(double t, const HandleWrench& wrench,
                                      const ShoulderState& shoulder) {
  const double angle = angle_mean_.push(bridged_angle(t, shoulder));
  const double torque = torque_mean_.push(wrench.tauz_nm);

  VelocityCommand cmd;
  cmd.v_mps = linear_.step(wrench.fx_n);
  cmd.omega_dps = engine_.infer(angle, torque);
  return cmd;
}

void FuzzyController::reset() {
  linear_.reset();
  torque_mean_.reset();
  angle_mean_.reset();
  has_valid_ = false;
}

}  // namespace walker
