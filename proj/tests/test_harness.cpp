#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wsn/harness.hpp"
#include "wsn/io.hpp"

using Catch::Approx;
using namespace wsn;

namespace {

double mean_pairwise(const std::vector<Position>& a, const std::vector<Position>& b, bool same) {
  double s = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = same ? i + 1 : 0; j < b.size(); ++j) {
      s += distance(a[i], b[j]);
      ++n;
    }
  }
  return s / n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("uniform topology with a single node") {
  TopologySpec s;
  s.cluster_count = 1;
  s.nodes_per_cluster = {1};
  const Network net = generate_topology(s, 1, 0.5, 0.001);
  REQUIRE(net.nodes.size() == 1);
  CHECK(net.nodes[0].position.x >= 0.0);
  CHECK(net.nodes[0].position.x <= 100.0);
  CHECK(net.nodes[0].position.y >= 0.0);
  CHECK(net.nodes[0].position.y <= 100.0);
  CHECK(net.clusters[0].members == std::vector<NodeId>{0});
}

TEST_CASE("topology is deterministic under a seed and stays in the field") {
  for (TopologyMode mode : {TopologyMode::Uniform, TopologyMode::GaussianClustered}) {
    TopologySpec s;
    s.mode = mode;
    s.width = 80;
    s.height = 60;
    s.cluster_count = 4;
    s.nodes_per_cluster = {10, 3, 25, 7};
    const Network a = generate_topology(s, 99, 1.0, 0.0);
    const Network b = generate_topology(s, 99, 1.0, 0.0);
    REQUIRE(a.nodes.size() == 45);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      CHECK(a.nodes[i].position == b.nodes[i].position);
      CHECK(a.nodes[i].position.x >= 0.0);
      CHECK(a.nodes[i].position.x <= 80.0);
      CHECK(a.nodes[i].position.y >= 0.0);
      CHECK(a.nodes[i].position.y <= 60.0);
    }
    std::size_t assigned = 0;
    for (const auto& c : a.clusters) assigned += c.members.size();
    CHECK(assigned == a.nodes.size());
    const Network other = generate_topology(s, 100, 1.0, 0.0);
    CHECK_FALSE(other.nodes[0].position == a.nodes[0].position);
  }
}

TEST_CASE("gaussian clusters are tighter inside than between") {
  TopologySpec s;
  s.mode = TopologyMode::GaussianClustered;
  s.cluster_count = 3;
  s.nodes_per_cluster = {20, 20, 20};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Network net = generate_topology(s, seed, 1.0, 0.0);
    std::vector<std::vector<Position>> groups(3);
    for (const auto& n : net.nodes) groups[n.cluster].push_back(n.position);
    double within = 0.0, between = 0.0;
    for (int c = 0; c < 3; ++c) within += mean_pairwise(groups[c], groups[c], true) / 3.0;
    between = (mean_pairwise(groups[0], groups[1], false) + mean_pairwise(groups[0], groups[2], false) +
               mean_pairwise(groups[1], groups[2], false)) /
              3.0;
    CHECK(within < between);
  }
}

TEST_CASE("topology rejects mismatched cluster sizes") {
  TopologySpec s;
  s.cluster_count = 3;
  s.nodes_per_cluster = {5, 5};
  CHECK_THROWS_AS(generate_topology(s, 1, 1.0, 0.0), ConfigError);
}

TEST_CASE("zero rounds leaves the network untouched") {
  SimConfig c;
  c.max_rounds = 0;
  const RunResult r = run(c);
  CHECK(r.rounds.empty());
  CHECK(r.total_messages == 0);
  for (double e : r.final_residual) CHECK(e == c.initial_energy);
  CHECK_FALSE(r.first_node_death_round);
}

TEST_CASE("a lone node drains at the closed-form rate") {
  SimConfig c;
  c.cluster_count = 1;
  c.nodes_per_cluster = {1};
  c.initial_energy = 0.05;
  c.max_rounds = 100000;
  c.seed = 12;
  const Network net = generate_topology(topology_spec(c), derive_seed(c.seed, kTopologyStream),
                                        c.initial_energy, c.failure_rate);
  const double d = distance(net.nodes[0].position, c.coordinator_position());
  const auto& m = c.energy;
  // Every round after the second re-runs the election (two control receptions)
  // and sends one packet to the coordinator.
  const double per_round =
      2.0 * m.ctrl_bits * m.e_elec + m.packet_bits * (m.e_elec + m.eps_amp * d * d);
  const int quotient = static_cast<int>(std::floor(c.initial_energy / per_round));

  const RunResult r = run(c);
  REQUIRE(r.first_node_death_round);
  CHECK(r.first_node_death_round == r.last_node_death_round);
  CHECK(std::abs(*r.first_node_death_round - quotient) <= 1);
}

TEST_CASE("runs are reproducible and respect the lifetime ordering") {
  SimConfig c;
  c.initial_energy = 0.1;
  const RunResult a = run(c);
  const RunResult b = run(c);
  CHECK(a.rounds == b.rounds);
  CHECK(a.final_residual == b.final_residual);
  REQUIRE(a.first_node_death_round);
  REQUIRE(a.last_node_death_round);
  CHECK(*a.first_node_death_round <= *a.last_node_death_round);
  CHECK(*a.last_node_death_round <= c.max_rounds);
  for (std::size_t i = 1; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].alive <= a.rounds[i - 1].alive);
    CHECK(a.rounds[i].total_residual <= a.rounds[i - 1].total_residual);
  }
}

TEST_CASE("compare against itself gives identical columns") {
  SimConfig c;
  c.initial_energy = 0.05;
  const Comparison cmp = compare(c, 1, Scheme::KTheorem, Scheme::KTheorem, 1);
  REQUIRE(cmp.rows.size() == 1);
  CHECK(cmp.rows[0].first_death_a == cmp.rows[0].first_death_b);
  CHECK(cmp.rows[0].variance_a == cmp.rows[0].variance_b);
  CHECK(cmp.mean_first_death_a == cmp.mean_first_death_b);
}

TEST_CASE("comparison variance equals recomputation from the node energies") {
  SimConfig c;
  c.initial_energy = 0.05;
  const Comparison cmp = compare(c, 2, Scheme::KTheorem, Scheme::RandomBaseline, 2);
  for (const auto& row : cmp.rows) {
    SimConfig ca = c;
    ca.seed = row.seed;
    ca.scheme = Scheme::KTheorem;
    const RunResult ra = run(ca);
    const auto& energies = ra.residual_trace.at(static_cast<std::size_t>(row.checkpoint_round - 1));
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= static_cast<double>(energies.size());
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    var /= static_cast<double>(energies.size());
    CHECK(row.variance_a == Approx(var).epsilon(1e-12));
    CHECK(ra.rounds.at(static_cast<std::size_t>(row.checkpoint_round - 1)).residual_variance ==
          Approx(var).epsilon(1e-12));
  }
}

TEST_CASE("replications are independent of each other") {
  SimConfig c;
  c.initial_energy = 0.03;
  const Comparison three = compare(c, 3, Scheme::KTheorem, Scheme::RandomBaseline, 1);
  SimConfig shifted = c;
  shifted.seed = c.seed + 2;
  const Comparison alone = compare(shifted, 1, Scheme::KTheorem, Scheme::RandomBaseline, 1);
  CHECK(alone.rows[0].first_death_a == three.rows[2].first_death_a);
  CHECK(alone.rows[0].first_death_b == three.rows[2].first_death_b);
  CHECK(alone.rows[0].variance_a == three.rows[2].variance_a);
}

TEST_CASE("metrics CSV round-trips at printed precision") {
  SimConfig c;
  c.initial_energy = 0.02;
  c.mobility.mode = MobilityMode::RandomWaypoint;
  const RunResult r = run(c);
  REQUIRE_FALSE(r.rounds.empty());
  std::stringstream out;
  write_metrics_csv(out, r.rounds);
  const std::string text = out.str();
  CHECK(text.rfind(kMetricsCsvHeader, 0) == 0);

  std::stringstream in(text);
  const auto parsed = read_metrics_csv(in);
  REQUIRE(parsed.size() == r.rounds.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) CHECK(parsed[i] == as_printed(r.rounds[i]));

  std::stringstream again;
  write_metrics_csv(again, parsed);
  CHECK(again.str() == text);
}

TEST_CASE("CSV encodes headless clusters and heads with semicolons") {
  RoundMetrics m;
  m.round = 3;
  m.alive = 7;
  m.total_residual = 1.0 / 3.0;
  m.residual_variance = 2e-7;
  m.ch_ids = {4, std::nullopt, 12};
  std::stringstream out;
  write_metrics_csv(out, {m});
  CHECK(out.str() == std::string(kMetricsCsvHeader) + "\n3,7,0.333333333,2e-07,0,0,0,4;-;12\n");
}

TEST_CASE("config parsing") {
  const SimConfig d = parse_config("{}");
  CHECK(d.r == 0.15);
  CHECK(d.total_nodes() == 100);

  const SimConfig c = parse_config(R"({"r": 0.3, "scheme": "baseline",
      "mobility": {"mode": "random-waypoint", "v_max": 2.5},
      "energy": {"packet_bits": 4000}, "cn_position": {"x": 10, "y": 20}})");
  CHECK(c.r == 0.3);
  CHECK(c.scheme == Scheme::RandomBaseline);
  CHECK(c.mobility.mode == MobilityMode::RandomWaypoint);
  CHECK(c.mobility.v_max == 2.5);
  CHECK(c.energy.packet_bits == 4000);
  CHECK(c.coordinator_position() == Position{10, 20});

  CHECK_THROWS_AS(parse_config(R"({"r": 0.6})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"energy": {"e_elc": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"cluster_count": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);

  const SimConfig back = parse_config(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("shipped configs parse") {
  for (const auto& entry : std::filesystem::directory_iterator(CONFIG_DIR)) {
    if (entry.path().extension() == ".json") CHECK_NOTHROW(load_config(entry.path()));
  }
}

TEST_CASE("default.json spells out the built-in defaults") {
  const SimConfig from_file = load_config(std::filesystem::path(CONFIG_DIR) / "default.json");
  CHECK(config_to_json(from_file) == config_to_json(SimConfig{}));
}

TEST_CASE("CLI simulate writes identical files for identical arguments") {
  const auto dir = std::filesystem::temp_directory_path() / "wsnsim_cli_test";
  std::filesystem::create_directories(dir);
  const std::string base = std::string(WSNSIM_PATH) + " simulate --config " + CONFIG_DIR +
                           "/default.json --rounds 200 --seed 5 --out ";
  REQUIRE(std::system((base + (dir / "a.csv").string() + " > /dev/null").c_str()) == 0);
  REQUIRE(std::system((base + (dir / "b.csv").string() + " > /dev/null").c_str()) == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  std::stringstream in(a);
  CHECK(read_metrics_csv(in).size() == 200);

  const std::string t1 = std::string(WSNSIM_PATH) + " table1 > " + (dir / "t1.txt").string();
  REQUIRE(std::system(t1.c_str()) == 0);
  const std::string table = slurp(dir / "t1.txt");
  CHECK(table.find("K_i = 5") != std::string::npos);
  CHECK(table.find("C_i = {3, 4, 6}") != std::string::npos);

  const std::string bad = std::string(WSNSIM_PATH) + " simulate --config " + CONFIG_DIR +
                          "/default.json --scheme nope --out /dev/null 2> /dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
