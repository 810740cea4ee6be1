#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

/// Raised for any invalid simulation parameter, before a run starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// Euclidean distance in meters.
double distance(const Position& a, const Position& b);
double squared_distance(const Position& a, const Position& b);

/// First-order radio: transmit costs bits * (e_elec + eps_amp * d^2),
/// receive costs bits * e_elec, aggregation e_agg per bit per input signal.
struct RadioEnergyModel {
  double e_elec = 50e-9;     // J/bit
  double eps_amp = 100e-12;  // J/bit/m^2
  double e_agg = 5e-9;       // J/bit/signal
  std::uint32_t packet_bits = 2000;
  std::uint32_t ctrl_bits = 200;

  void validate() const;
};

double tx_energy(const RadioEnergyModel& model, std::uint64_t bits, double d);
double rx_energy(const RadioEnergyModel& model, std::uint64_t bits);
double aggregation_energy(const RadioEnergyModel& model, std::uint64_t bits,
                          std::uint64_t signals);

struct SensorNode {
  NodeId id = 0;
  ClusterId cluster = 0;
  Position position;
  double initial_energy = 0.0;
  double residual_energy = 0.0;
  double failure_rate = 0.0;  // lambda, failures per round
  int consecutive_ch_terms = 0;
  // Most recent position last; holds up to window + 1 samples.
  std::deque<Position> position_history;

  bool alive() const { return residual_energy > 0.0; }

  /// Removes up to `joules` and returns what was actually taken. A debit
  /// that would go below zero leaves the node at exactly zero.
  double debit(double joules);

  void record_position(std::size_t window);
};

struct Cluster {
  ClusterId id = 0;
  std::vector<NodeId> members;  // sorted ascending
  std::optional<NodeId> head;
  int k = 0;
};

/// Resource-rich relay between cluster heads and the base station. Its
/// energy is not tracked and it is reachable from every node.
struct CoordinatorNode {
  Position position;
};

struct RatingWeights {
  double energy = 0.4;
  double distance = 0.3;
  double reliability = 0.2;
  double mobility = 0.1;

  /// Scales arbitrary non-negative weights so they sum to one.
  static RatingWeights normalized(double energy, double distance, double reliability,
                                  double mobility);
  void validate() const;
};

enum class Scheme { KTheorem, RandomBaseline };
enum class TopologyMode { Uniform, GaussianClustered };
enum class MobilityMode { Static, RandomWaypoint };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);
std::string to_string(TopologyMode m);
TopologyMode parse_topology_mode(const std::string& s);
std::string to_string(MobilityMode m);
MobilityMode parse_mobility_mode(const std::string& s);

struct MobilitySpec {
  MobilityMode mode = MobilityMode::Static;
  double v_max = 1.0;     // m/round
  int pause = 0;          // rounds spent at each waypoint
  int window = 5;         // rounds of history for the mobility degree
};

struct SimConfig {
  double field_width = 100.0;
  double field_height = 100.0;
  int cluster_count = 5;
  std::vector<int> nodes_per_cluster{20, 20, 20, 20, 20};
  TopologyMode topology = TopologyMode::Uniform;
  double cluster_spread = 8.0;  // gaussian sigma in meters
  std::optional<Position> cn_position;  // field centroid when unset
  double r = 0.15;
  double initial_energy = 0.5;
  RadioEnergyModel energy;
  RatingWeights weights;
  MobilitySpec mobility;
  double failure_rate = 0.001;
  int max_rounds = 5000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::KTheorem;

  int total_nodes() const;
  double field_diagonal() const;
  Position coordinator_position() const;
  void validate() const;
};

struct RoundMetrics {
  int round = 0;
  int alive = 0;
  double total_residual = 0.0;
  double residual_variance = 0.0;
  std::uint64_t messages_data = 0;
  std::uint64_t messages_ctrl = 0;
  std::vector<std::optional<NodeId>> ch_ids;  // one entry per cluster
  int reselection_events = 0;

  friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

/// Population variance (divides by n).
double population_variance(const std::vector<double>& values);

}  // namespace wsn
