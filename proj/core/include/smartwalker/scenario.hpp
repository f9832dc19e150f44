#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace walker {

enum class Direction { kRight = 0, kStraight = 1, kLeft = 2 };

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);

enum class SegmentKind { kStraight, kTurn };

/// One course element: a straight run of a given length or an in-course turn
/// by a signed angle (positive = left/CCW), each with a forward speed target.
struct Segment {
  SegmentKind kind = SegmentKind::kStraight;
  double magnitude = 0.0;  // length in m, or signed turn angle in deg
  double speed_mps = 0.0;

  Direction direction() const;
};

struct Scenario {
  std::string name;
  std::vector<Segment> segments;
  double turn_rate_dps = 20.0;  // reference heading sweep rate during turns

  void validate() const;
};

/// Parses the line-oriented scenario format:
///   name <token>          (optional, defaults to the file stem)
///   turn_rate_dps <deg/s> (optional)
///   straight <length_m> <speed_mps>
///   turn <angle_deg> <speed_mps>
/// Blank lines and '#' comments are ignored.
Scenario parse_scenario(std::istream& in, std::string_view default_name);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace walker
