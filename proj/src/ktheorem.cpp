#include "wsn/ktheorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wsn {
namespace {

// Dense all-pairs one-relay cost, row-major over member index.
std::vector<double> effective_cost_matrix(std::span<const Member> members) {
  const std::size_t n = members.size();
  std::vector<double> d2(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = squared_distance(members[i].position, members[j].position);
      d2[i * n + j] = c;
      d2[j * n + i] = c;
    }
  }
  std::vector<double> eff = d2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double best = d2[i * n + j];
      for (std::size_t w = 0; w < n; ++w) {
        if (w == i || w == j) continue;
        best = std::min(best, d2[i * n + w] + d2[w * n + j]);
      }
      eff[i * n + j] = best;
      eff[j * n + i] = best;
    }
  }
  return eff;
}

std::size_t index_of(NodeId id, std::span<const Member> members) {
  const auto it = std::find_if(members.begin(), members.end(),
                               [id](const Member& m) { return m.id == id; });
  if (it == members.end()) throw std::invalid_argument("node is not a cluster member");
  return static_cast<std::size_t>(it - members.begin());
}

}  // namespace

int cluster_k(int alive, double r) {
  if (!(r > 0.0) || r > 0.5) throw ConfigError("r must lie in (0, 0.50]");
  if (alive < 1) throw std::invalid_argument("cluster_k: no alive members");
  if (alive == 1) return 0;
  // The epsilon keeps exact halves such as 0.35 * 10 from rounding down.
  const int k = static_cast<int>(std::floor(alive * r + 0.5 + 1e-9));
  return std::clamp(k, 1, alive - 1);
}

double effective_distance(NodeId u, NodeId v, std::span<const Member> members) {
  if (u == v) throw std::invalid_argument("effective_distance: u == v");
  const std::size_t iu = index_of(u, members);
  const std::size_t iv = index_of(v, members);
  double best = squared_distance(members[iu].position, members[iv].position);
  for (std::size_t w = 0; w < members.size(); ++w) {
    if (w == iu || w == iv) continue;
    best = std::min(best, squared_distance(members[iu].position, members[w].position) +
                              squared_distance(members[w].position, members[iv].position));
  }
  return best;
}

KnnResult knn_lists(std::span<const Member> members, int k) {
  if (k < 0) throw std::invalid_argument("knn_lists: negative k");
  const std::size_t n = members.size();
  const std::vector<double> eff = effective_cost_matrix(members);

  KnnResult result;
  result.truncated = n < static_cast<std::size_t>(k) + 1;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), n == 0 ? 0 : n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return members[a].id < members[b].id; });

  result.lists.reserve(n);
  std::vector<std::size_t> others;
  for (std::size_t i : order) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    auto closer = [&](std::size_t a, std::size_t b) {
      const double ca = eff[i * n + a];
      const double cb = eff[i * n + b];
      if (ca != cb) return ca < cb;
      return members[a].id < members[b].id;
    };
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(take),
                      others.end(), closer);
    NeighborList list{members[i].id, {}};
    list.neighbors.reserve(take);
    for (std::size_t t = 0; t < take; ++t) list.neighbors.push_back(members[others[t]].id);
    result.lists.push_back(std::move(list));
  }
  return result;
}

FrequencyMap frequency_of_occurrence(std::span<const NeighborList> lists) {
  FrequencyMap freq;
  for (const auto& l : lists) freq[l.owner] += 1;
  for (const auto& l : lists) {
    for (NodeId v : l.neighbors) {
      if (v != l.owner) freq[v] += 1;
    }
  }
  return freq;
}

int selection_threshold(const FrequencyMap& frequencies) {
  if (frequencies.empty()) throw std::invalid_argument("selection_threshold: empty map");
  long long sum = 0;
  for (const auto& [id, f] : frequencies) sum += f;
  const auto n = static_cast<long long>(frequencies.size());
  // floor(sum / n + 1/2) in exact integer arithmetic.
  const long long mean = (2 * sum + n) / (2 * n);
  return static_cast<int>(mean) + 1;
}

CandidateSet candidate_set(const FrequencyMap& frequencies, int threshold, int k) {
  CandidateSet out;
  for (const auto& [id, f] : frequencies) {
    if (f >= threshold) out.nodes.push_back(id);
  }
  if (!out.nodes.empty() || frequencies.empty()) return out;

  out.fallback = true;
  std::vector<std::pair<NodeId, int>> ranked(frequencies.begin(), frequencies.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)),
                                                 ranked.size());
  for (std::size_t i = 0; i < take; ++i) out.nodes.push_back(ranked[i].first);
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

KSelection select_candidates(ClusterId cluster, std::span<const Member> members, double r) {
  if (members.empty()) throw std::invalid_argument("select_candidates: extinct cluster");
  KSelection sel;
  sel.cluster = cluster;
  sel.k = cluster_k(static_cast<int>(members.size()), r);
  const KnnResult knn = knn_lists(members, sel.k);
  sel.truncated = knn.truncated;
  sel.frequencies = frequency_of_occurrence(knn.lists);
  sel.threshold = selection_threshold(sel.frequencies);
  CandidateSet c = candidate_set(sel.frequencies, sel.threshold, sel.k);
  sel.candidates = std::move(c.nodes);
  sel.fallback = c.fallback;
  return sel;
}

}  // namespace wsn
