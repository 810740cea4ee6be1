#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/ktheorem.hpp"
#include "wsn/mobility.hpp"
#include "wsn/rating.hpp"

namespace wsn {

enum class Phase { Setup, Steady, Maintenance };

enum class ReselectionDecision { Continue, Reselect, ForcedReselect };

/// End-of-round rule for an incumbent head. `e_prev` is what the head
/// dissipated during the round that just ended.
ReselectionDecision reselection_decision(const SensorNode& head, double e_prev, int cluster_alive,
                                         int k);

struct TdmaSchedule {
  ClusterId cluster = 0;
  std::vector<std::pair<NodeId, int>> slots;  // (member, slot index)
};

/// One slot per alive non-head member, ascending NodeId, indices from 0.
TdmaSchedule make_tdma_schedule(const Cluster& cluster, std::span<const SensorNode> nodes);

enum class DebitKind { CtrlTx, CtrlRx, DataTx, DataRx, Aggregation };

struct EnergyDebit {
  NodeId node = 0;
  ClusterId origin = 0;  // cluster whose traffic caused the debit
  Phase phase = Phase::Setup;
  DebitKind kind = DebitKind::CtrlTx;
  double requested = 0.0;
  double debited = 0.0;  // less than requested only when the node died
};

struct Network {
  std::vector<SensorNode> nodes;  // nodes[i].id == i
  std::vector<Cluster> clusters;  // clusters[c].id == c
  CoordinatorNode cn;
};

/// What the coordinator did for one cluster during an election.
struct SetupRecord {
  ClusterId cluster = 0;
  int alive = 0;
  int k = 0;
  std::vector<NodeId> candidates;
  int rated = 0;  // nodes asked for a combined rating
  std::uint64_t ctrl_messages = 0;
  std::optional<NodeId> head;
  bool head_alive = false;   // at election time
  bool head_member = false;  // head belongs to the cluster
  bool fallback = false;     // elected outside the candidate set
};

struct SteadyRecord {
  ClusterId cluster = 0;
  int uplinks = 0;   // member transmissions made
  int received = 0;  // member packets the head received
  bool delivered = false;
};

struct RoundReport {
  RoundMetrics metrics;
  std::vector<SetupRecord> setups;
  std::vector<ClusterId> maintained;
  std::vector<SteadyRecord> steady;
  std::vector<ReselectionDecision> decisions;  // per cluster, for the next round
  std::vector<EnergyDebit> debits;
};

/// Owns one network and advances it round by round. Not thread-safe;
/// independent engines share nothing.
class Engine {
 public:
  Engine(SimConfig config, Network network);

  /// Runs one full round and returns its report.
  RoundReport step();

  bool all_dead() const;
  int round() const { return round_; }
  const Network& network() const { return net_; }
  const SimConfig& config() const { return config_; }
  double initial_total_energy() const { return initial_total_; }

  // The phases below are what step() composes. They are public so tests can
  // drive a single phase; call begin_round() first.
  void begin_round();
  std::vector<SetupRecord> setup_phase(std::span<const ClusterId> clusters);
  std::vector<SetupRecord> baseline_random_rotation(std::span<const ClusterId> clusters);
  std::vector<SteadyRecord> steady_phase();
  void maintenance_phase(std::span<const ClusterId> clusters);

  const std::vector<EnergyDebit>& round_debits() const { return debits_; }
  std::uint64_t round_ctrl_messages() const { return ctrl_msgs_; }
  std::uint64_t round_data_messages() const { return data_msgs_; }

 private:
  std::vector<Member> alive_members(const Cluster& c) const;
  int alive_count(const Cluster& c) const;
  double charge(NodeId node, ClusterId origin, Phase phase, DebitKind kind, double joules);
  void install_head(Cluster& c, NodeId head);
  RatedNode rate(NodeId id) const;
  RoundMetrics collect_metrics() const;

  SimConfig config_;
  Network net_;
  MobilityModel mobility_;
  std::mt19937_64 rotation_rng_;
  double d_max_;
  double initial_total_ = 0.0;
  int round_ = 0;

  std::vector<double> spent_this_round_;
  std::vector<EnergyDebit> debits_;
  std::uint64_t ctrl_msgs_ = 0;
  std::uint64_t data_msgs_ = 0;

  std::vector<ReselectionDecision> pending_;  // per cluster
  std::vector<std::optional<NodeId>> previous_head_;
  std::vector<std::set<NodeId>> served_in_epoch_;
  int epoch_ = -1;
};

/// Deterministic per-purpose seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline constexpr std::uint64_t kTopologyStream = 1;
inline constexpr std::uint64_t kMobilityStream = 2;
inline constexpr std::uint64_t kRotationStream = 3;

}  // namespace wsn
