#include "wsn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace wsn {

TopologySpec topology_spec(const SimConfig& config) {
  TopologySpec s;
  s.mode = config.topology;
  s.width = config.field_width;
  s.height = config.field_height;
  s.cluster_count = config.cluster_count;
  s.nodes_per_cluster = config.nodes_per_cluster;
  s.spread = config.cluster_spread;
  s.cn_position = config.cn_position;
  return s;
}

Network generate_topology(const TopologySpec& spec, std::uint64_t seed, double initial_energy,
                          double failure_rate) {
  if (spec.cluster_count < 1) throw ConfigError("cluster_count must be at least 1");
  if (spec.nodes_per_cluster.size() != static_cast<std::size_t>(spec.cluster_count)) {
    throw ConfigError("nodes_per_cluster length must equal cluster_count");
  }
  if (!(spec.width > 0.0) || !(spec.height > 0.0)) throw ConfigError("empty field");

  std::mt19937_64 rng(seed);
  Network net;
  net.cn.position = spec.cn_position.value_or(Position{spec.width / 2.0, spec.height / 2.0});

  std::vector<Position> centers;
  if (spec.mode == TopologyMode::GaussianClustered) {
    // Centers keep a margin from the border and, when possible, 4 sigma apart.
    const double margin = std::min({2.0 * spec.spread, spec.width / 4.0, spec.height / 4.0});
    std::uniform_real_distribution<double> cx(margin, spec.width - margin);
    std::uniform_real_distribution<double> cy(margin, spec.height - margin);
    for (int c = 0; c < spec.cluster_count; ++c) {
      Position best{};
      double best_gap = -1.0;
      for (int attempt = 0; attempt < 200; ++attempt) {
        const Position p{cx(rng), cy(rng)};
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& q : centers) gap = std::min(gap, distance(p, q));
        if (gap > best_gap) {
          best = p;
          best_gap = gap;
        }
        if (gap >= 4.0 * spec.spread) break;
      }
      centers.push_back(best);
    }
  }

  const double strip = spec.width / spec.cluster_count;
  for (int c = 0; c < spec.cluster_count; ++c) {
    if (spec.nodes_per_cluster[c] < 1) throw ConfigError("every cluster needs at least one node");
    Cluster cl;
    cl.id = static_cast<ClusterId>(c);
    for (int i = 0; i < spec.nodes_per_cluster[c]; ++i) {
      Position p;
      if (spec.mode == TopologyMode::Uniform) {
        std::uniform_real_distribution<double> ux(c * strip, (c + 1) * strip);
        std::uniform_real_distribution<double> uy(0.0, spec.height);
        p = {ux(rng), uy(rng)};
      } else {
        std::normal_distribution<double> g(0.0, spec.spread);
        do {
          p = {centers[c].x + g(rng), centers[c].y + g(rng)};
        } while (p.x < 0.0 || p.x > spec.width || p.y < 0.0 || p.y > spec.height);
      }
      SensorNode n;
      n.id = static_cast<NodeId>(net.nodes.size());
      n.cluster = cl.id;
      n.position = p;
      n.initial_energy = initial_energy;
      n.residual_energy = initial_energy;
      n.failure_rate = failure_rate;
      cl.members.push_back(n.id);
      net.nodes.push_back(std::move(n));
    }
    net.clusters.push_back(std::move(cl));
  }
  return net;
}

RunResult run(const SimConfig& config) {
  config.validate();
  Network net = generate_topology(topology_spec(config),
                                  derive_seed(config.seed, kTopologyStream),
                                  config.initial_energy, config.failure_rate);
  const int total = static_cast<int>(net.nodes.size());
  Engine engine(config, std::move(net));

  RunResult result;
  int previous_alive = total;
  while (engine.round() < config.max_rounds && !engine.all_dead()) {
    RoundReport rep = engine.step();
    const RoundMetrics& m = rep.metrics;
    if (m.alive < total && !result.first_node_death_round) result.first_node_death_round = m.round;
    if (m.alive == 0 && previous_alive > 0) result.last_node_death_round = m.round;
    previous_alive = m.alive;
    result.total_messages += m.messages_data + m.messages_ctrl;
    std::vector<double> residual;
    residual.reserve(engine.network().nodes.size());
    for (const auto& n : engine.network().nodes) residual.push_back(n.residual_energy);
    result.residual_trace.push_back(std::move(residual));
    result.rounds.push_back(std::move(rep.metrics));
  }
  for (const auto& n : engine.network().nodes) result.final_residual.push_back(n.residual_energy);
  return result;
}

const std::vector<double>& residual_at(const RunResult& result, int round,
                                       const std::vector<double>& initial) {
  if (round <= 0 || result.residual_trace.empty()) return initial;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(round),
                                         result.residual_trace.size()) - 1;
  return result.residual_trace[idx];
}

namespace {

ComparisonRow run_pair(const SimConfig& base, int replication, Scheme a, Scheme b) {
  SimConfig ca = base;
  ca.seed = base.seed + static_cast<std::uint64_t>(replication);
  ca.scheme = a;
  SimConfig cb = ca;
  cb.scheme = b;
  const RunResult ra = run(ca);
  const RunResult rb = run(cb);

  ComparisonRow row;
  row.replication = replication;
  row.seed = ca.seed;
  row.first_death_a = ra.first_node_death_round.value_or(base.max_rounds);
  row.first_death_b = rb.first_node_death_round.value_or(base.max_rounds);
  row.checkpoint_round = std::min(row.first_death_a, row.first_death_b);
  const std::vector<double> initial(static_cast<std::size_t>(base.total_nodes()),
                                    base.initial_energy);
  row.variance_a = population_variance(residual_at(ra, row.checkpoint_round, initial));
  row.variance_b = population_variance(residual_at(rb, row.checkpoint_round, initial));
  return row;
}

}  // namespace

Comparison compare(const SimConfig& config, int replications, Scheme scheme_a, Scheme scheme_b,
                   unsigned threads) {
  config.validate();
  if (replications < 1) throw ConfigError("replications must be at least 1");

  Comparison out;
  out.scheme_a = scheme_a;
  out.scheme_b = scheme_b;
  out.rows.resize(static_cast<std::size_t>(replications));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(replications));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int i = static_cast<int>(t); i < replications; i += static_cast<int>(threads)) {
          out.rows[static_cast<std::size_t>(i)] = run_pair(config, i, scheme_a, scheme_b);
        }
      });
    }
  }

  int a_lower = 0;
  for (const auto& r : out.rows) {
    out.mean_first_death_a += r.first_death_a;
    out.mean_first_death_b += r.first_death_b;
    out.mean_variance_a += r.variance_a;
    out.mean_variance_b += r.variance_b;
    if (r.variance_a < r.variance_b) ++a_lower;
  }
  const double n = static_cast<double>(replications);
  out.mean_first_death_a /= n;
  out.mean_first_death_b /= n;
  out.mean_variance_a /= n;
  out.mean_variance_b /= n;
  out.fraction_a_lower_variance = a_lower / n;
  return out;
}

}  // namespace wsn
