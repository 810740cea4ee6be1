#include "wsn/core.hpp"

#include <numeric>

namespace wsn {

double squared_distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void RadioEnergyModel::validate() const {
  if (!(e_elec >= 0.0) || !(eps_amp >= 0.0) || !(e_agg >= 0.0)) {
    throw ConfigError("energy coefficients must be non-negative");
  }
  if (packet_bits == 0 || ctrl_bits == 0) {
    throw ConfigError("packet_bits and ctrl_bits must be positive");
  }
}

double tx_energy(const RadioEnergyModel& model, std::uint64_t bits, double d) {
  if (bits == 0) throw std::invalid_argument("tx_energy: bits must be positive");
  if (!(d >= 0.0)) throw std::invalid_argument("tx_energy: negative distance");
  const auto b = static_cast<double>(bits);
  return b * model.e_elec + b * model.eps_amp * d * d;
}

double rx_energy(const RadioEnergyModel& model, std::uint64_t bits) {
  if (bits == 0) throw std::invalid_argument("rx_energy: bits must be positive");
  return static_cast<double>(bits) * model.e_elec;
}

double aggregation_energy(const RadioEnergyModel& model, std::uint64_t bits,
                          std::uint64_t signals) {
  return static_cast<double>(bits) * static_cast<double>(signals) * model.e_agg;
}

double SensorNode::debit(double joules) {
  if (joules <= 0.0 || !alive()) return 0.0;
  if (joules >= residual_energy) {
    const double taken = residual_energy;
    residual_energy = 0.0;
    return taken;
  }
  residual_energy -= joules;
  return joules;
}

void SensorNode::record_position(std::size_t window) {
  position_history.push_back(position);
  while (position_history.size() > window + 1) position_history.pop_front();
}

RatingWeights RatingWeights::normalized(double energy, double distance, double reliability,
                                        double mobility) {
  const double sum = energy + distance + reliability + mobility;
  if (!(sum > 0.0) || energy < 0.0 || distance < 0.0 || reliability < 0.0 || mobility < 0.0) {
    throw ConfigError("rating weights must be non-negative with a positive sum");
  }
  return {energy / sum, distance / sum, reliability / sum, mobility / sum};
}

void RatingWeights::validate() const {
  for (double w : {energy, distance, reliability, mobility}) {
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("rating weight outside [0,1]");
  }
  if (std::abs(energy + distance + reliability + mobility - 1.0) > 1e-9) {
    throw ConfigError("rating weights must sum to 1");
  }
}

std::string to_string(Scheme s) { return s == Scheme::KTheorem ? "ktheorem" : "baseline"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "ktheorem") return Scheme::KTheorem;
  if (s == "baseline" || s == "random-baseline") return Scheme::RandomBaseline;
  throw ConfigError("unknown scheme: " + s);
}

std::string to_string(TopologyMode m) {
  return m == TopologyMode::Uniform ? "uniform" : "gaussian-clustered";
}

TopologyMode parse_topology_mode(const std::string& s) {
  if (s == "uniform") return TopologyMode::Uniform;
  if (s == "gaussian-clustered") return TopologyMode::GaussianClustered;
  throw ConfigError("unknown topology mode: " + s);
}

std::string to_string(MobilityMode m) {
  return m == MobilityMode::Static ? "static" : "random-waypoint";
}

MobilityMode parse_mobility_mode(const std::string& s) {
  if (s == "static") return MobilityMode::Static;
  if (s == "random-waypoint") return MobilityMode::RandomWaypoint;
  throw ConfigError("unknown mobility mode: " + s);
}

int SimConfig::total_nodes() const {
  return std::accumulate(nodes_per_cluster.begin(), nodes_per_cluster.end(), 0);
}

double SimConfig::field_diagonal() const { return std::hypot(field_width, field_height); }

Position SimConfig::coordinator_position() const {
  return cn_position.value_or(Position{field_width / 2.0, field_height / 2.0});
}

void SimConfig::validate() const {
  if (!(field_width > 0.0) || !(field_height > 0.0) || !std::isfinite(field_width) ||
      !std::isfinite(field_height)) {
    throw ConfigError("field dimensions must be positive and finite");
  }
  if (cluster_count < 1) throw ConfigError("cluster_count must be at least 1");
  if (nodes_per_cluster.size() != static_cast<std::size_t>(cluster_count)) {
    throw ConfigError("nodes_per_cluster length must equal cluster_count");
  }
  for (int n : nodes_per_cluster) {
    if (n < 1) throw ConfigError("every cluster needs at least one node");
  }
  if (!(r > 0.0)) throw ConfigError("r must be positive");
  if (r > 0.5) throw ConfigError("r should not be more than 0.50");
  if (!(initial_energy > 0.0) || !std::isfinite(initial_energy)) {
    throw ConfigError("initial_energy must be positive");
  }
  if (!(cluster_spread > 0.0)) throw ConfigError("cluster_spread must be positive");
  if (cn_position && (!std::isfinite(cn_position->x) || !std::isfinite(cn_position->y))) {
    throw ConfigError("cn_position must be finite");
  }
  energy.validate();
  weights.validate();
  if (!(failure_rate >= 0.0)) throw ConfigError("failure_rate must be non-negative");
  if (mobility.window < 1) throw ConfigError("mobility window must be at least 1");
  if (mobility.pause < 0) throw ConfigError("mobility pause must be non-negative");
  if (!(mobility.v_max > 0.0)) throw ConfigError("mobility v_max must be positive");
  if (max_rounds < 0) throw ConfigError("max_rounds must be non-negative");
}

double population_variance(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / n;
}

}  // namespace wsn
