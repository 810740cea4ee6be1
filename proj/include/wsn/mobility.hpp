#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wsn/core.hpp"

namespace wsn {

/// Per-round node movement. Static leaves positions untouched; random
/// waypoint walks each node toward a uniformly drawn target at a speed in
/// [0.1, 1] * v_max, pausing `pause` rounds on arrival.
class MobilityModel {
 public:
  MobilityModel(MobilitySpec spec, double width, double height, std::uint64_t seed);

  /// Moves every alive node by one round and appends to its history.
  void advance(std::vector<SensorNode>& nodes);

  const MobilitySpec& spec() const { return spec_; }

 private:
  struct Waypoint {
    Position target;
    double speed = 0.0;
    int pause_left = 0;
    bool initialized = false;
  };

  void pick_waypoint(Waypoint& wp);

  MobilitySpec spec_;
  double width_;
  double height_;
  std::mt19937_64 rng_;
  std::vector<Waypoint> state_;
};

}  // namespace wsn
