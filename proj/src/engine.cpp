#include "wsn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wsn {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ReselectionDecision reselection_decision(const SensorNode& head, double e_prev, int cluster_alive,
                                         int k) {
  if (!head.alive()) return ReselectionDecision::ForcedReselect;
  if (head.consecutive_ch_terms >= kMaxConsecutiveTerms) {
    return ReselectionDecision::ForcedReselect;
  }
  if (head.residual_energy >= 2.0 * e_prev) return ReselectionDecision::Continue;
  // Reselection only pays off while enough of the cluster is left.
  if (cluster_alive >= k + 1) return ReselectionDecision::Reselect;
  return ReselectionDecision::Continue;
}

TdmaSchedule make_tdma_schedule(const Cluster& cluster, std::span<const SensorNode> nodes) {
  TdmaSchedule s{cluster.id, {}};
  int slot = 0;
  for (NodeId id : cluster.members) {
    if (cluster.head && *cluster.head == id) continue;
    if (!nodes[id].alive()) continue;
    s.slots.emplace_back(id, slot++);
  }
  return s;
}

Engine::Engine(SimConfig config, Network network)
    : config_(std::move(config)),
      net_(std::move(network)),
      mobility_(config_.mobility, config_.field_width, config_.field_height,
                derive_seed(config_.seed, kMobilityStream)),
      rotation_rng_(derive_seed(config_.seed, kRotationStream)),
      d_max_(config_.field_diagonal()) {
  config_.validate();
  for (std::size_t i = 0; i < net_.nodes.size(); ++i) {
    if (net_.nodes[i].id != i) throw std::invalid_argument("node ids must match their index");
  }
  for (std::size_t c = 0; c < net_.clusters.size(); ++c) {
    auto& cl = net_.clusters[c];
    if (cl.id != c) throw std::invalid_argument("cluster ids must match their index");
    std::sort(cl.members.begin(), cl.members.end());
    for (NodeId id : cl.members) {
      if (id >= net_.nodes.size() || net_.nodes[id].cluster != c) {
        throw std::invalid_argument("cluster member does not reference its cluster");
      }
    }
  }
  for (auto& n : net_.nodes) {
    initial_total_ += n.residual_energy;
    n.position_history.clear();
    n.record_position(static_cast<std::size_t>(config_.mobility.window));
  }
  spent_this_round_.assign(net_.nodes.size(), 0.0);
  pending_.assign(net_.clusters.size(), ReselectionDecision::ForcedReselect);
  served_in_epoch_.resize(net_.clusters.size());
}

bool Engine::all_dead() const {
  return std::none_of(net_.nodes.begin(), net_.nodes.end(),
                      [](const SensorNode& n) { return n.alive(); });
}

std::vector<Member> Engine::alive_members(const Cluster& c) const {
  std::vector<Member> out;
  for (NodeId id : c.members) {
    const auto& n = net_.nodes[id];
    if (n.alive()) out.push_back({id, n.position});
  }
  return out;
}

int Engine::alive_count(const Cluster& c) const {
  return static_cast<int>(std::count_if(c.members.begin(), c.members.end(),
                                        [&](NodeId id) { return net_.nodes[id].alive(); }));
}

double Engine::charge(NodeId node, ClusterId origin, Phase phase, DebitKind kind, double joules) {
  const double taken = net_.nodes[node].debit(joules);
  spent_this_round_[node] += taken;
  debits_.push_back({node, origin, phase, kind, joules, taken});
  return taken;
}

void Engine::install_head(Cluster& c, NodeId head) {
  const bool reelected = c.head && *c.head == head;
  for (NodeId id : c.members) {
    auto& n = net_.nodes[id];
    if (id == head) {
      n.consecutive_ch_terms =
          reelected ? std::min(n.consecutive_ch_terms + 1, kMaxConsecutiveTerms) : 1;
    } else {
      n.consecutive_ch_terms = 0;
    }
  }
  c.head = head;
}

RatedNode Engine::rate(NodeId id) const {
  const auto& n = net_.nodes[id];
  RatingInputs in;
  in.alpha = energy_score(n);
  in.beta = distance_score(n, net_.cn, d_max_);
  in.reliability = reliability(n.failure_rate, static_cast<double>(round_ - 1));
  in.mobility = mobility_degree(n, config_.mobility.window, config_.mobility.v_max);
  return {id, combined_rating(in, config_.weights), n.consecutive_ch_terms};
}

void Engine::begin_round() {
  ++round_;
  debits_.clear();
  ctrl_msgs_ = 0;
  data_msgs_ = 0;
  std::fill(spent_this_round_.begin(), spent_this_round_.end(), 0.0);
  if (round_ > 1) mobility_.advance(net_.nodes);
}

namespace {

struct PendingDebit {
  NodeId node;
  DebitKind kind;
  double joules;
};

}  // namespace

// Election traffic is costed per event but settled after the election, so
// every member alive when the phase starts takes part in all of its steps.
std::vector<SetupRecord> Engine::setup_phase(std::span<const ClusterId> clusters) {
  const auto& em = config_.energy;
  const double ctrl_rx = rx_energy(em, em.ctrl_bits);
  std::vector<SetupRecord> records;

  for (ClusterId cid : clusters) {
    Cluster& cl = net_.clusters[cid];
    const std::vector<Member> members = alive_members(cl);
    if (members.empty()) {
      cl.head.reset();
      continue;
    }
    SetupRecord rec;
    rec.cluster = cid;
    rec.alive = static_cast<int>(members.size());
    std::vector<PendingDebit> pend;
    auto broadcast_rx = [&] {
      rec.ctrl_messages += 1;
      for (const auto& m : members) pend.push_back({m.id, DebitKind::CtrlRx, ctrl_rx});
    };
    auto uplink_to_cn = [&](NodeId id) {
      rec.ctrl_messages += 1;
      pend.push_back({id, DebitKind::CtrlTx,
                      tx_energy(em, em.ctrl_bits, distance(net_.nodes[id].position, net_.cn.position))});
    };

    NodeId head = members.front().id;
    if (members.size() == 1) {
      cl.k = 0;
      rec.candidates = {head};
      broadcast_rx();  // k
      broadcast_rx();  // confirmation
    } else {
      // coordinator announces k_i
      broadcast_rx();
      // every member reports its neighbor list
      for (const auto& m : members) uplink_to_cn(m.id);
      const KSelection sel = select_candidates(cid, members, config_.r);
      cl.k = sel.k;
      rec.candidates = sel.candidates;
      // rating request and reply, candidates only
      std::vector<RatedNode> rated;
      for (NodeId id : sel.candidates) {
        rec.ctrl_messages += 1;
        pend.push_back({id, DebitKind::CtrlRx, ctrl_rx});
        uplink_to_cn(id);
        rated.push_back(rate(id));
      }
      rec.rated = static_cast<int>(rated.size());
      std::optional<NodeId> elected = elect_head(rated);
      if (!elected) {
        std::vector<RatedNode> others;
        for (const auto& m : members) {
          if (std::binary_search(sel.candidates.begin(), sel.candidates.end(), m.id)) continue;
          rec.ctrl_messages += 1;
          pend.push_back({m.id, DebitKind::CtrlRx, ctrl_rx});
          uplink_to_cn(m.id);
          others.push_back(rate(m.id));
        }
        rec.rated += static_cast<int>(others.size());
        rec.fallback = true;
        elected = elect_head({}, others);
        if (!elected) {
          // Unreachable with two or more members: only the incumbent can be at the limit.
          const auto best = std::max_element(
              rated.begin(), rated.end(),
              [](const RatedNode& a, const RatedNode& b) { return a.rating < b.rating; });
          elected = best->id;
        }
      }
      head = *elected;
      broadcast_rx();
    }

    rec.head = head;
    rec.head_alive = net_.nodes[head].alive();
    rec.head_member = std::binary_search(cl.members.begin(), cl.members.end(), head);
    rec.k = cl.k;
    install_head(cl, head);
    for (const auto& p : pend) charge(p.node, cid, Phase::Setup, p.kind, p.joules);
    ctrl_msgs_ += rec.ctrl_messages;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SetupRecord> Engine::baseline_random_rotation(std::span<const ClusterId> clusters) {
  const auto& em = config_.energy;
  const double ctrl_rx = rx_energy(em, em.ctrl_bits);
  const int epoch_len = static_cast<int>(std::ceil(1.0 / config_.r - 1e-9));
  const int epoch = (round_ - 1) / epoch_len;
  if (epoch != epoch_) {
    for (auto& s : served_in_epoch_) s.clear();
    epoch_ = epoch;
  }

  std::vector<SetupRecord> records;
  for (ClusterId cid : clusters) {
    Cluster& cl = net_.clusters[cid];
    const std::vector<Member> members = alive_members(cl);
    if (members.empty()) {
      cl.head.reset();
      continue;
    }
    auto& served = served_in_epoch_[cid];
    std::vector<NodeId> eligible;
    for (const auto& m : members) {
      if (!served.contains(m.id)) eligible.push_back(m.id);
    }
    // Fewer alive members than the epoch is long: everyone is eligible again.
    if (eligible.empty()) {
      for (const auto& m : members) eligible.push_back(m.id);
    }
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    const NodeId head = eligible[pick(rotation_rng_)];
    served.insert(head);

    SetupRecord rec;
    rec.cluster = cid;
    rec.alive = static_cast<int>(members.size());
    rec.candidates = eligible;
    rec.head = head;
    rec.head_alive = net_.nodes[head].alive();
    rec.head_member = std::binary_search(cl.members.begin(), cl.members.end(), head);
    rec.ctrl_messages = 2;  // announcement + confirmation
    cl.k = members.size() == 1 ? 0 : cluster_k(static_cast<int>(members.size()), config_.r);
    rec.k = cl.k;
    install_head(cl, head);
    for (int b = 0; b < 2; ++b) {
      for (const auto& m : members) charge(m.id, cid, Phase::Setup, DebitKind::CtrlRx, ctrl_rx);
    }
    ctrl_msgs_ += rec.ctrl_messages;
    records.push_back(std::move(rec));
  }
  return records;
}

void Engine::maintenance_phase(std::span<const ClusterId> clusters) {
  const auto& em = config_.energy;
  for (ClusterId cid : clusters) {
    Cluster& cl = net_.clusters[cid];
    if (!cl.head || !net_.nodes[*cl.head].alive()) continue;
    SensorNode& head = net_.nodes[*cl.head];
    head.consecutive_ch_terms = std::min(head.consecutive_ch_terms + 1, kMaxConsecutiveTerms);

    std::vector<NodeId> listeners;
    double reach = 0.0;
    for (NodeId id : cl.members) {
      if (id == head.id || !net_.nodes[id].alive()) continue;
      listeners.push_back(id);
      reach = std::max(reach, distance(head.position, net_.nodes[id].position));
    }
    if (listeners.empty()) continue;
    // One topology-update broadcast from the head, costed at its farthest member.
    ctrl_msgs_ += 1;
    charge(head.id, cid, Phase::Maintenance, DebitKind::CtrlTx,
           tx_energy(em, em.ctrl_bits, reach));
    for (NodeId id : listeners) {
      charge(id, cid, Phase::Maintenance, DebitKind::CtrlRx, rx_energy(em, em.ctrl_bits));
    }
  }
}

std::vector<SteadyRecord> Engine::steady_phase() {
  const auto& em = config_.energy;
  std::vector<SteadyRecord> records;
  for (auto& cl : net_.clusters) {
    if (!cl.head) continue;
    SteadyRecord rec{cl.id, 0, 0, false};
    const NodeId hid = *cl.head;
    if (!net_.nodes[hid].alive()) {
      records.push_back(rec);
      continue;
    }
    const TdmaSchedule schedule = make_tdma_schedule(cl, net_.nodes);
    for (const auto& [id, slot] : schedule.slots) {
      SensorNode& member = net_.nodes[id];
      if (!member.alive()) continue;
      data_msgs_ += 1;
      rec.uplinks += 1;
      charge(id, cl.id, Phase::Steady, DebitKind::DataTx,
             tx_energy(em, em.packet_bits, distance(member.position, net_.nodes[hid].position)));
      if (net_.nodes[hid].alive()) {
        charge(hid, cl.id, Phase::Steady, DebitKind::DataRx, rx_energy(em, em.packet_bits));
        charge(hid, cl.id, Phase::Steady, DebitKind::Aggregation,
               aggregation_energy(em, em.packet_bits, 1));
        rec.received += 1;
      }
    }
    SensorNode& head = net_.nodes[hid];
    if (head.alive()) {
      data_msgs_ += 1;
      charge(hid, cl.id, Phase::Steady, DebitKind::DataTx,
             tx_energy(em, em.packet_bits, distance(head.position, net_.cn.position)));
      rec.delivered = true;
    }
    records.push_back(rec);
  }
  return records;
}

RoundMetrics Engine::collect_metrics() const {
  RoundMetrics m;
  m.round = round_;
  std::vector<double> residual;
  residual.reserve(net_.nodes.size());
  for (const auto& n : net_.nodes) {
    residual.push_back(n.residual_energy);
    if (n.alive()) ++m.alive;
  }
  m.total_residual = std::accumulate(residual.begin(), residual.end(), 0.0);
  m.residual_variance = population_variance(residual);
  m.messages_data = data_msgs_;
  m.messages_ctrl = ctrl_msgs_;
  for (const auto& cl : net_.clusters) m.ch_ids.push_back(cl.head);
  return m;
}

RoundReport Engine::step() {
  begin_round();
  RoundReport report;

  std::vector<ClusterId> elect;
  for (const auto& cl : net_.clusters) {
    if (alive_count(cl) == 0) {
      net_.clusters[cl.id].head.reset();
      continue;
    }
    const bool head_ok = cl.head && net_.nodes[*cl.head].alive();
    if (config_.scheme == Scheme::RandomBaseline || !head_ok ||
        pending_[cl.id] != ReselectionDecision::Continue) {
      elect.push_back(cl.id);
    } else {
      report.maintained.push_back(cl.id);
    }
  }

  report.setups = config_.scheme == Scheme::KTheorem ? setup_phase(elect)
                                                     : baseline_random_rotation(elect);
  maintenance_phase(report.maintained);
  report.steady = steady_phase();

  report.decisions.assign(net_.clusters.size(), ReselectionDecision::ForcedReselect);
  for (const auto& cl : net_.clusters) {
    if (!cl.head) continue;
    const SensorNode& head = net_.nodes[*cl.head];
    const int alive = alive_count(cl);
    if (alive == 0) continue;
    const int k = alive == 1 ? 0 : cluster_k(alive, config_.r);
    ReselectionDecision d = reselection_decision(head, spent_this_round_[head.id], alive, k);
    const auto st = std::find_if(report.steady.begin(), report.steady.end(),
                                 [&](const SteadyRecord& s) { return s.cluster == cl.id; });
    if (d == ReselectionDecision::Continue && st != report.steady.end() && !st->delivered) {
      d = ReselectionDecision::Reselect;
    }
    report.decisions[cl.id] = d;
  }
  pending_ = report.decisions;

  report.metrics = collect_metrics();
  report.metrics.reselection_events = static_cast<int>(report.setups.size());
  report.debits = debits_;
  return report;
}

}  // namespace wsn
