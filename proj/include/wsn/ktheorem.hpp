#pragma once

#include <map>
#include <span>
#include <vector>

#include "wsn/core.hpp"

namespace wsn {

/// An alive cluster member as seen by candidate selection.
struct Member {
  NodeId id = 0;
  Position position;
};

/// Neighbor-list size for a cluster with `alive` members: round(alive * r)
/// clamped to [1, alive - 1]. A single-member cluster gets 0, meaning its
/// sole node is head by default. Throws ConfigError when r is outside (0, 0.5].
int cluster_k(int alive, double r);

/// One-relay energy proxy between two members, in m^2: the cheaper of the
/// direct d^2 and the best d(u,w)^2 + d(w,v)^2 over every other member w.
double effective_distance(NodeId u, NodeId v, std::span<const Member> members);

struct NeighborList {
  NodeId owner = 0;
  std::vector<NodeId> neighbors;  // nearest first
};

struct KnnResult {
  std::vector<NeighborList> lists;  // one per member, ascending owner id
  bool truncated = false;           // fewer than k + 1 members were available
};

/// k nearest co-members of every member under effective_distance. Ties go
/// to the lower NodeId.
KnnResult knn_lists(std::span<const Member> members, int k);

using FrequencyMap = std::map<NodeId, int>;

/// Each owner counts once for itself plus once per appearance in another
/// member's list.
FrequencyMap frequency_of_occurrence(std::span<const NeighborList> lists);

/// Mean frequency rounded half up, plus one.
int selection_threshold(const FrequencyMap& frequencies);

struct CandidateSet {
  std::vector<NodeId> nodes;  // ascending
  bool fallback = false;
};

/// Nodes with frequency >= threshold. When none qualify, the max(k, 1)
/// highest-frequency nodes (ties to the lower id) are returned instead.
CandidateSet candidate_set(const FrequencyMap& frequencies, int threshold, int k);

struct KSelection {
  ClusterId cluster = 0;
  int k = 0;
  FrequencyMap frequencies;
  int threshold = 0;
  std::vector<NodeId> candidates;
  bool fallback = false;
  bool truncated = false;
};

/// Full candidate extraction for one cluster and round.
KSelection select_candidates(ClusterId cluster, std::span<const Member> members, double r);

}  // namespace wsn
