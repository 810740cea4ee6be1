#include "wsn/rating.hpp"

#include <algorithm>
#include <cmath>

namespace wsn {

double energy_score(const SensorNode& node) {
  if (!(node.initial_energy > 0.0)) return 0.0;
  return std::clamp(node.residual_energy / node.initial_energy, 0.0, 1.0);
}

double distance_score(const SensorNode& node, const CoordinatorNode& cn, double d_max) {
  if (!(d_max > 0.0)) throw std::invalid_argument("distance_score: d_max must be positive");
  return std::clamp(1.0 - distance(node.position, cn.position) / d_max, 0.0, 1.0);
}

double reliability(double failure_rate, double t) {
  if (failure_rate < 0.0 || t < 0.0) {
    throw std::invalid_argument("reliability: negative rate or time");
  }
  return std::exp(-failure_rate * t);
}

double mobility_degree(const SensorNode& node, int window, double v_max) {
  if (window < 1) throw std::invalid_argument("mobility_degree: window must be >= 1");
  if (!(v_max > 0.0)) throw std::invalid_argument("mobility_degree: v_max must be positive");
  const auto& h = node.position_history;
  if (h.size() < 2) return 0.0;
  const std::size_t steps = std::min<std::size_t>(static_cast<std::size_t>(window), h.size() - 1);
  double travelled = 0.0;
  for (std::size_t i = h.size() - steps; i < h.size(); ++i) travelled += distance(h[i - 1], h[i]);
  return std::clamp(travelled / static_cast<double>(steps) / v_max, 0.0, 1.0);
}

double combined_rating(const RatingInputs& in, const RatingWeights& w) {
  w.validate();
  const double cr = w.energy * in.alpha + w.distance * in.beta + w.reliability * in.reliability +
                    w.mobility * (1.0 - in.mobility);
  return std::clamp(cr, 0.0, 1.0);
}

namespace {

std::optional<NodeId> best_eligible(std::span<const RatedNode> pool) {
  const RatedNode* best = nullptr;
  for (const auto& c : pool) {
    if (c.consecutive_ch_terms >= kMaxConsecutiveTerms) continue;
    if (best == nullptr || c.rating > best->rating ||
        (c.rating == best->rating && c.id < best->id)) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

}  // namespace

std::optional<NodeId> elect_head(std::span<const RatedNode> candidates,
                                 std::span<const RatedNode> fallback) {
  if (auto id = best_eligible(candidates)) return id;
  return best_eligible(fallback);
}

}  // namespace wsn
