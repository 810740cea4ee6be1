#include "wsn/mobility.hpp"

namespace wsn {

MobilityModel::MobilityModel(MobilitySpec spec, double width, double height, std::uint64_t seed)
    : spec_(spec), width_(width), height_(height), rng_(seed) {}

void MobilityModel::pick_waypoint(Waypoint& wp) {
  std::uniform_real_distribution<double> ux(0.0, width_);
  std::uniform_real_distribution<double> uy(0.0, height_);
  std::uniform_real_distribution<double> us(0.1 * spec_.v_max, spec_.v_max);
  wp.target = {ux(rng_), uy(rng_)};
  wp.speed = us(rng_);
  wp.initialized = true;
}

void MobilityModel::advance(std::vector<SensorNode>& nodes) {
  const auto window = static_cast<std::size_t>(spec_.window);
  if (spec_.mode == MobilityMode::Static) {
    for (auto& n : nodes) n.record_position(window);
    return;
  }
  if (state_.size() < nodes.size()) state_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    SensorNode& n = nodes[i];
    Waypoint& wp = state_[i];
    if (n.alive()) {
      if (!wp.initialized) pick_waypoint(wp);
      if (wp.pause_left > 0) {
        --wp.pause_left;
      } else {
        const double remaining = distance(n.position, wp.target);
        if (remaining <= wp.speed) {
          n.position = wp.target;
          wp.pause_left = spec_.pause;
          pick_waypoint(wp);
        } else {
          const double f = wp.speed / remaining;
          n.position.x += (wp.target.x - n.position.x) * f;
          n.position.y += (wp.target.y - n.position.y) * f;
        }
      }
    }
    n.record_position(window);
  }
}

}  // namespace wsn
