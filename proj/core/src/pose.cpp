#include "smartwalker/pose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walker {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy))
    throw std::invalid_argument("principal point must be finite");
}

Keypoint3D deproject(const Keypoint2D& p, const CameraIntrinsics& K) {
  K.validate();
  if (!(p.depth_m > 0.0)) throw std::invalid_argument("invalid keypoint: depth must be positive");
  Keypoint3D out;
  out.name = p.name;
  out.x = (p.x - K.cx) * p.depth_m / K.fx;
  out.y = (p.y - K.cy) * p.depth_m / K.fy;
  out.z = p.depth_m;
  return out;
}

double abduction_angle_deg(const Keypoint3D& shoulder, const Keypoint3D& elbow,
                           const Keypoint3D& hip) {
  const double ux = elbow.x - shoulder.x;
  const double uy = elbow.y - shoulder.y;
  const double uz = elbow.z - shoulder.z;
  const double wx = hip.x - shoulder.x;
  const double wy = hip.y - shoulder.y;
  const double wz = hip.z - shoulder.z;

  const double nu = std::sqrt(ux * ux + uy * uy + uz * uz);
  const double nw = std::sqrt(wx * wx + wy * wy + wz * wz);
  if (!(nu > 0.0) || !(nw > 0.0))
    throw std::invalid_argument("degenerate pose: zero-length joint vector");

  double c = (ux * wx + uy * wy + uz * wz) / (nu * nw);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

ShoulderState frame_to_shoulder_state(const BodyFrame& frame, const CameraIntrinsics& K,
                                      double min_confidence, bool mirror) {
  ShoulderState state;
  state.t = frame.t;

  const std::string_view names[3] = {
      mirror ? joints::kLeftShoulder : joints::kRightShoulder,
      mirror ? joints::kLeftElbow : joints::kRightElbow,
      mirror ? joints::kLeftHip : joints::kRightHip,
  };

  Keypoint3D pts[3];
  for (int i = 0; i < 3; ++i) {
    auto it = frame.joints.find(std::string(names[i]));
    if (it == frame.joints.end()) return state;
    const Keypoint2D& kp = it->second;
    if (kp.confidence < min_confidence || !(kp.depth_m > 0.0)) return state;
    pts[i] = deproject(kp, K);
  }

  try {
    state.abduction_deg = abduction_angle_deg(pts[0], pts[1], pts[2]);
  } catch (const std::invalid_argument&) {
    return state;  // degenerate geometry marks the frame invalid, not fatal
  }
  state.valid = true;
  return state;
}

ShoulderTracker::ShoulderTracker(const CameraIntrinsics& K, double straight_center_deg,
                                 double min_confidence, bool mirror, DropoutPolicy policy)
    : intrinsics_(K),
      straight_center_deg_(straight_center_deg),
      min_confidence_(min_confidence),
      mirror_(mirror),
      policy_(policy) {
  K.validate();
}

ShoulderState ShoulderTracker::observe(const BodyFrame& frame) {
  if (frame.t <= last_t_)
    throw std::invalid_argument("frame timestamps must be strictly increasing");
  last_t_ = frame.t;

  ShoulderState state = frame_to_shoulder_state(frame, intrinsics_, min_confidence_, mirror_);
  if (state.valid) {
    last_valid_t_ = state.t;
    last_valid_angle_ = state.abduction_deg;
    has_valid_ = true;
  }
  return state;
}

double ShoulderTracker::angle_at(double t) const {
  if (!has_valid_) return straight_center_deg_;
  const double age = t - last_valid_t_;
  if (age <= policy_.hold_s) return last_valid_angle_;
  const double decayed = (age - policy_.hold_s) / policy_.decay_tau_s;
  const double alpha = std::exp(-decayed);
  return straight_center_deg_ + (last_valid_angle_ - straight_center_deg_) * alpha;
}

}  // namespace walker
