#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "smartwalker/admittance.hpp"
#include "smartwalker/pose.hpp"
#include "smartwalker/signals.hpp"

namespace walker {

struct GaussianMF {
  double center = 0.0;
  double sigma = 1.0;

  double membership(double x) const;
};

struct FuzzyTerm {
  std::string label;
  GaussianMF mf;
};

/// Named fuzzy input/output with ordered terms (centers strictly increasing,
/// labels unique).
struct LinguisticVariable {
  std::string name;
  std::vector<FuzzyTerm> terms;

  void validate() const;
  const FuzzyTerm& term(std::size_t i) const { return terms.at(i); }
};

enum class AngleTerm { kLow = 0, kMiddle = 1, kHigh = 2 };
enum class TorqueTerm { kNegative = 0, kNeutral = 1, kPositive = 2 };
enum class SteerTerm {
  kSharpRight = 0,
  kGentleRight = 1,
  kStraight = 2,
  kGentleLeft = 3,
  kSharpLeft = 4
};

std::string_view to_string(SteerTerm s);
SteerTerm steer_term_from_string(std::string_view s);
std::string_view angle_term_label(AngleTerm a);
std::string_view torque_term_label(TorqueTerm t);

/// Complete 3x3 steering rule table indexed by (angle term, torque term).
struct RuleBase {
  std::array<SteerTerm, 9> table{};

  SteerTerm lookup(AngleTerm a, TorqueTerm t) const {
    return table[static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(t)];
  }
  void set(AngleTerm a, TorqueTerm t, SteerTerm s) {
    table[static_cast<std::size_t>(a) * 3 + static_cast<std::size_t>(t)] = s;
  }
  bool operator==(const RuleBase&) const = default;
};

/// The steering rule table for right-handed operation.
RuleBase default_rule_base();

/// Left-handed rule table: torque columns swap and outputs negate.
RuleBase mirrored(const RuleBase& base);

/// Per-direction calibration values (world turn directions).
struct DirectionValues {
  double left = 0.0;
  double straight = 0.0;
  double right = 0.0;
};

/// Calibrated controller: input/output linguistic variables plus the rule
/// table. Immutable after calibration and safely shareable.
struct FuzzyProfile {
  LinguisticVariable angle;   // deg: Low, Middle, High
  LinguisticVariable torque;  // N*m: Negative, Neutral, Positive
  LinguisticVariable steer;   // deg/s: SharpRight .. SharpLeft
  RuleBase rules{};
  bool mirror = false;

  void validate() const;
};

inline constexpr double kSteerCenters[5] = {-90.0, -45.0, 0.0, 45.0, 90.0};
inline constexpr double kSteerSigmaDps = 20.0;
inline constexpr double kDefuzzStepDps = 0.1;

/// Builds a per-user profile from measured per-direction shoulder-angle means
/// and torque thresholds. For right-handed use the orderings are
/// right < straight < left on both inputs; mirror=true expects the left-handed
/// angle pattern (left < straight < right) and negated torque values.
FuzzyProfile calibrate_profile(const DirectionValues& angle_means_deg,
                               const DirectionValues& torque_thresholds_nm,
                               bool mirror = false);

/// Mamdani min/max inference with centroid defuzzification over [-90, 90] on a
/// 0.1 deg/s trapezoidal grid. Positive output = left/CCW.
double infer_omega(const FuzzyProfile& profile, double angle_deg, double torque_nm);

/// Reusable inference engine with the output-term grid precomputed; identical
/// arithmetic to infer_omega, intended for per-tick loops.
class FuzzyInferenceEngine {
 public:
  explicit FuzzyInferenceEngine(const FuzzyProfile& profile);

  double infer(double angle_deg, double torque_nm) const;
  const FuzzyProfile& profile() const { return profile_; }

 private:
  FuzzyProfile profile_;
  std::vector<double> grid_;                   // omega sample points
  std::array<std::vector<double>, 5> curves_;  // output-term memberships on grid_
};

/// The proposed hybrid controller: linear velocity from the conventional
/// admittance channel, angular velocity from fuzzy inference over the smoothed
/// torque and shoulder abduction angle. Invalid shoulder frames are bridged by
/// the pose dropout policy.
class FuzzyController {
 public:
  FuzzyController(const FuzzyProfile& profile, const LinearAdmittanceParams& lin,
                  SampleRate rate, std::size_t smoothing_window = 60,
                  DropoutPolicy dropout = {});

  VelocityCommand tick(double t, const HandleWrench& wrench, const ShoulderState& shoulder);
  void reset();

  const FuzzyInferenceEngine& engine() const { return engine_; }

 private:
  double bridged_angle(double t, const ShoulderState& shoulder);

  FuzzyInferenceEngine engine_;
  SecondOrderAdmittance linear_;
  RollingMean torque_mean_;
  RollingMean angle_mean_;
  DropoutPolicy dropout_;
  double last_valid_t_ = 0.0;
  double last_valid_angle_ = 0.0;
  bool has_valid_ = false;
};

}  // namespace walker
