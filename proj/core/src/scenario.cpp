#include "smartwalker/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace walker {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kRight: return "right";
    case Direction::kStraight: return "straight";
    case Direction::kLeft: return "left";
  }
  throw std::logic_error("bad direction");
}

Direction direction_from_string(std::string_view s) {
  if (s == "right") return Direction::kRight;
  if (s == "straight") return Direction::kStraight;
  if (s == "left") return Direction::kLeft;
  throw std::invalid_argument("unknown direction: " + std::string(s));
}

Direction Segment::direction() const {
  if (kind == SegmentKind::kStraight) return Direction::kStraight;
  return magnitude > 0.0 ? Direction::kLeft : Direction::kRight;
}

void Scenario::validate() const {
  if (segments.empty()) throw std::invalid_argument("scenario has no segments");
  if (!(turn_rate_dps > 0.0)) throw std::invalid_argument("turn rate must be positive");
  for (const Segment& s : segments) {
    if (!(s.speed_mps > 0.0)) throw std::invalid_argument("segment speed must be positive");
    if (s.kind == SegmentKind::kStraight) {
      if (!(s.magnitude > 0.0)) throw std::invalid_argument("segment length must be positive");
    } else {
      if (!(std::fabs(s.magnitude) > 0.0) || !std::isfinite(s.magnitude))
        throw std::invalid_argument("turn angle must be nonzero");
    }
  }
}

Scenario parse_scenario(std::istream& in, std::string_view default_name) {
  Scenario sc;
  sc.name = std::string(default_name);

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    auto require_double = [&](const char* what) {
      double v;
      if (!(ls >> v) || !std::isfinite(v)) {
        throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                    ": expected numeric " + what);
      }
      return v;
    };

    if (key == "name") {
      if (!(ls >> sc.name))
        throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                    ": missing name");
    } else if (key == "turn_rate_dps") {
      sc.turn_rate_dps = require_double("turn rate");
    } else if (key == "straight") {
      const double len = require_double("length");
      const double speed = require_double("speed");
      sc.segments.push_back({SegmentKind::kStraight, len, speed});
    } else if (key == "turn") {
      const double angle = require_double("angle");
      const double speed = require_double("speed");
      sc.segments.push_back({SegmentKind::kTurn, angle, speed});
    } else {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": unknown directive '" + key + "'");
    }
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path.string());
  return parse_scenario(in, path.stem().string());
}

}  // namespace walker
