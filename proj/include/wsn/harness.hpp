#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/engine.hpp"

namespace wsn {

struct TopologySpec {
  TopologyMode mode = TopologyMode::Uniform;
  double width = 100.0;
  double height = 100.0;
  int cluster_count = 1;
  std::vector<int> nodes_per_cluster;
  double spread = 8.0;                  // gaussian sigma
  std::optional<Position> cn_position;  // centroid when unset
};

TopologySpec topology_spec(const SimConfig& config);

/// Places nodes and assigns clusters. Uniform mode splits the field into
/// equal vertical strips, one per cluster, with members uniform inside
/// their strip. Gaussian mode draws each cluster around its own center.
/// Every node starts with `initial_energy` and `failure_rate`.
Network generate_topology(const TopologySpec& spec, std::uint64_t seed, double initial_energy,
                          double failure_rate);

struct RunResult {
  std::vector<RoundMetrics> rounds;
  std::optional<int> first_node_death_round;  // nullopt: nobody died
  std::optional<int> last_node_death_round;   // nullopt: somebody survived
  std::uint64_t total_messages = 0;
  std::vector<double> final_residual;
  std::vector<std::vector<double>> residual_trace;  // per round, per node
};

/// Runs until every node is dead or max_rounds is reached.
RunResult run(const SimConfig& config);

/// Per-node residual energy after `round` (round 0 = deployment).
const std::vector<double>& residual_at(const RunResult& result, int round,
                                       const std::vector<double>& initial);

struct ComparisonRow {
  int replication = 0;
  std::uint64_t seed = 0;
  int checkpoint_round = 0;
  int first_death_a = 0;
  int first_death_b = 0;
  double variance_a = 0.0;
  double variance_b = 0.0;
};

struct Comparison {
  Scheme scheme_a = Scheme::KTheorem;
  Scheme scheme_b = Scheme::RandomBaseline;
  std::vector<ComparisonRow> rows;
  double mean_first_death_a = 0.0;
  double mean_first_death_b = 0.0;
  double mean_variance_a = 0.0;
  double mean_variance_b = 0.0;
  double fraction_a_lower_variance = 0.0;
};

/// Replication seed i is config.seed + i; both schemes see the same
/// topology. The checkpoint is the earlier first-node-death round of the
/// pair (max_rounds when nobody died). A run without deaths counts as
/// max_rounds for the first-death mean. `threads` = 0 uses the hardware.
Comparison compare(const SimConfig& config, int replications,
                   Scheme scheme_a = Scheme::KTheorem, Scheme scheme_b = Scheme::RandomBaseline,
                   unsigned threads = 0);

}  // namespace wsn
