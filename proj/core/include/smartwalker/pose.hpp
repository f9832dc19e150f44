#pragma once

#include <map>
#include <string>
#include <string_view>

namespace walker {

struct CameraIntrinsics {
  double fx = 500.0;  // focal lengths, pixels
  double fy = 500.0;
  double cx = 320.0;  // principal point, pixels
  double cy = 240.0;

  void validate() const;
};

/// 2D keypoint with stereo depth, COCO18-style joint label.
struct Keypoint2D {
  std::string name;
  double x = 0.0;  // pixels
  double y = 0.0;
  double depth_m = 0.0;
  double confidence = 1.0;  // [0, 1]
};

/// Camera-frame 3D joint position, meters.
struct Keypoint3D {
  std::string name;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// One body-tracking frame. Joint labels follow the 18-joint skeleton; the
/// abduction pipeline needs shoulder, elbow and hip on the tracked side.
struct BodyFrame {
  double t = 0.0;
  std::map<std::string, Keypoint2D> joints;
};

struct ShoulderState {
  double t = 0.0;
  double abduction_deg = 0.0;  // [0, 180] when valid
  bool valid = false;
};

namespace joints {
inline constexpr std::string_view kRightShoulder = "r_shoulder";
inline constexpr std::string_view kRightElbow = "r_elbow";
inline constexpr std::string_view kRightHip = "r_hip";
inline constexpr std::string_view kLeftShoulder = "l_shoulder";
inline constexpr std::string_view kLeftElbow = "l_elbow";
inline constexpr std::string_view kLeftHip = "l_hip";
}  // namespace joints

/// Pinhole deprojection: X = (x - cx) * Z / fx, Y = (y - cy) * Z / fy, Z = depth.
Keypoint3D deproject(const Keypoint2D& p, const CameraIntrinsics& K);

/// Shoulder abduction angle in degrees: angle between the upper-arm vector
/// (shoulder -> elbow) and the torso vector (shoulder -> hip), cosine rule.
double abduction_angle_deg(const Keypoint3D& shoulder, const Keypoint3D& elbow,
                           const Keypoint3D& hip);

/// Full per-frame pipeline. Returns valid=false when a required joint is
/// missing, below min_confidence, or geometrically degenerate. mirror selects
/// the left-side joints.
ShoulderState frame_to_shoulder_state(const BodyFrame& frame, const CameraIntrinsics& K,
                                      double min_confidence = 0.5, bool mirror = false);

struct DropoutPolicy {
  double hold_s = 0.5;       // bridge invalid frames by holding the last value
  double decay_tau_s = 0.5;  // then decay toward the straight calibration center
};

/// Stream processor bridging tracking dropouts. Frames must arrive in strictly
/// increasing timestamp order; one tracker per walker.
class ShoulderTracker {
 public:
  ShoulderTracker(const CameraIntrinsics& K, double straight_center_deg,
                  double min_confidence = 0.5, bool mirror = false,
                  DropoutPolicy policy = {});

  /// Ingests a frame and returns the per-frame state (valid or not).
  ShoulderState observe(const BodyFrame& frame);

  /// Angle the controller should consume at time t: last valid angle while
  /// within the hold window, then an exponential decay toward the straight
  /// center. Before any valid frame, the straight center.
  double angle_at(double t) const;

  bool has_fix() const { return has_valid_; }

 private:
  CameraIntrinsics intrinsics_;
  double straight_center_deg_;
  double min_confidence_;
  bool mirror_;
  DropoutPolicy policy_;
  double last_t_ = -1.0;
  double last_valid_t_ = 0.0;
  double last_valid_angle_ = 0.0;
  bool has_valid_ = false;
};

}  // namespace walker
