#pragma once

#include <optional>
#include <span>

#include "wsn/core.hpp"

namespace wsn {

struct RatingInputs {
  double alpha = 0.0;        // residual energy score
  double beta = 0.0;         // closeness to the coordinator node
  double reliability = 0.0;  // probability of no failure so far
  double mobility = 0.0;     // 1 = most mobile
};

double energy_score(const SensorNode& node);

/// 1 - d(node, cn) / d_max, clamped to [0, 1].
double distance_score(const SensorNode& node, const CoordinatorNode& cn, double d_max);

/// Poisson survival probability exp(-lambda * t).
double reliability(double failure_rate, double t);

/// Mean per-round displacement over the last `window` rounds divided by
/// v_max, clamped to [0, 1]. Uses whatever history exists; none gives 0.
double mobility_degree(const SensorNode& node, int window, double v_max);

/// Weighted sum of the four scores with mobility inverted. Throws
/// ConfigError for weights that do not sum to one.
double combined_rating(const RatingInputs& in, const RatingWeights& w);

struct RatedNode {
  NodeId id = 0;
  double rating = 0.0;
  int consecutive_ch_terms = 0;
};

/// Highest-rated candidate below the two-term limit (ties to the lower id).
/// If every candidate is at the limit the best eligible node of `fallback`
/// is taken; nullopt when nobody is eligible.
std::optional<NodeId> elect_head(std::span<const RatedNode> candidates,
                                 std::span<const RatedNode> fallback = {});

inline constexpr int kMaxConsecutiveTerms = 2;

}  // namespace wsn
