// Command-line driver: single runs, scheme comparison, and the 10-node
// worked example.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wsn/harness.hpp"
#include "wsn/io.hpp"
#include "wsn/ktheorem.hpp"

namespace {

int simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<int> rounds, std::optional<std::string> scheme,
             const std::string& out_path) {
  wsn::SimConfig cfg = wsn::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (rounds) cfg.max_rounds = *rounds;
  if (scheme) cfg.scheme = wsn::parse_scheme(*scheme);
  cfg.validate();

  const wsn::RunResult result = wsn::run(cfg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  wsn::write_metrics_csv(out, result.rounds);

  std::cout << "scheme " << wsn::to_string(cfg.scheme) << ", seed " << cfg.seed << ": "
            << result.rounds.size() << " rounds, first death "
            << (result.first_node_death_round ? std::to_string(*result.first_node_death_round)
                                              : "none")
            << ", last death "
            << (result.last_node_death_round ? std::to_string(*result.last_node_death_round)
                                             : "none")
            << ", " << result.total_messages << " messages\n";
  return 0;
}

int compare(const std::string& config_path, int replications, unsigned threads,
            const std::string& out_path) {
  const wsn::SimConfig cfg = wsn::load_config(config_path);
  const wsn::Comparison cmp = wsn::compare(cfg, replications, wsn::Scheme::KTheorem,
                                           wsn::Scheme::RandomBaseline, threads);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  wsn::write_comparison_csv(out, cmp);

  std::cout << "scheme,mean_first_death,mean_checkpoint_variance\n"
            << "ktheorem," << cmp.mean_first_death_a << ',' << cmp.mean_variance_a << '\n'
            << "baseline," << cmp.mean_first_death_b << ',' << cmp.mean_variance_b << '\n'
            << "ktheorem lower variance in " << cmp.fraction_a_lower_variance * 100.0
            << "% of " << replications << " pairs\n";
  return 0;
}

int table1() {
  const std::vector<wsn::NeighborList> lists = {
      {1, {2, 3, 4}}, {2, {1, 4, 5}}, {3, {1, 4, 6}}, {4, {2, 3, 6}},  {5, {2, 4, 6}},
      {6, {3, 4, 5}}, {7, {3, 9, 10}}, {8, {5, 6, 9}}, {9, {6, 8, 10}}, {10, {6, 7, 9}}};
  const int k = 3;
  const auto freq = wsn::frequency_of_occurrence(lists);
  const int threshold = wsn::selection_threshold(freq);
  const auto cands = wsn::candidate_set(freq, threshold, k);

  std::cout << "node  k=" << k << " nearest neighbors  frequency\n";
  for (const auto& l : lists) {
    std::cout << l.owner << (l.owner < 10 ? "     " : "    ");
    for (std::size_t i = 0; i < l.neighbors.size(); ++i) {
      std::cout << (i ? ", " : "") << l.neighbors[i];
    }
    std::cout << "\t\t" << freq.at(l.owner) << '\n';
  }
  std::cout << "K_i = " << threshold << "\nC_i = {";
  for (std::size_t i = 0; i < cands.nodes.size(); ++i) {
    std::cout << (i ? ", " : "") << cands.nodes[i];
  }
  std::cout << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered sensor network simulator with K-theorem cluster-head selection"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<std::string> scheme;
  auto* sim = app.add_subcommand("simulate", "Run one simulation and write per-round metrics");
  sim->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Override the master seed");
  sim->add_option("--rounds", rounds, "Override max_rounds");
  sim->add_option("--scheme", scheme, "ktheorem or baseline")
      ->check(CLI::IsMember({"ktheorem", "baseline"}));
  sim->add_option("--out", out_path, "Metrics CSV path")->required();

  int replications = 30;
  unsigned threads = 0;
  auto* cmp = app.add_subcommand("compare", "Paired ktheorem vs random-rotation comparison");
  cmp->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  cmp->add_option("--replications", replications, "Number of paired runs")
      ->required()
      ->check(CLI::PositiveNumber);
  cmp->add_option("--threads", threads, "Worker threads (0 = all cores)");
  cmp->add_option("--out", out_path, "Per-replication CSV path")->required();

  auto* t1 = app.add_subcommand("table1", "Print the 10-node worked example");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(config_path, seed, rounds, scheme, out_path);
    if (*cmp) return compare(config_path, replications, threads, out_path);
    if (*t1) return table1();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
