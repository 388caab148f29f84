#pragma once

#include <string>

#include "ipr/sim/trajectory.hpp"

namespace ipr::slam {

// TUM trajectory format: one `timestamp tx ty tz qx qy qz qw` line per
// frame, space separated, timestamp = frame_id / frame_rate. Doubles are
// printed with 17 significant digits so a round trip is bit-exact.
std::string trajectory_to_tum(const sim::Trajectory& t);
sim::Trajectory trajectory_from_tum(const std::string& text, double frame_rate);

}  // namespace ipr::slam
