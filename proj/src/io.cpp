#include "wsn/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wsn {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"field_width", "field_height", "cluster_count", "nodes_per_cluster", "topology",
                  "cluster_spread", "cn_position", "r", "initial_energy", "energy", "weights",
                  "mobility", "failure_rate", "max_rounds", "seed", "scheme"},
                 "config");
  SimConfig c;
  read(root, "field_width", c.field_width);
  read(root, "field_height", c.field_height);
  read(root, "cluster_count", c.cluster_count);
  read(root, "nodes_per_cluster", c.nodes_per_cluster);
  read(root, "cluster_spread", c.cluster_spread);
  read(root, "r", c.r);
  read(root, "initial_energy", c.initial_energy);
  read(root, "failure_rate", c.failure_rate);
  read(root, "max_rounds", c.max_rounds);
  read(root, "seed", c.seed);
  if (root.contains("topology")) {
    std::string mode;
    read(root, "topology", mode);
    c.topology = parse_topology_mode(mode);
  }
  if (root.contains("scheme")) {
    std::string s;
    read(root, "scheme", s);
    c.scheme = parse_scheme(s);
  }
  if (root.contains("cn_position") && !root["cn_position"].is_null()) {
    const json& p = root["cn_position"];
    reject_unknown(p, {"x", "y"}, "cn_position");
    Position pos;
    read(p, "x", pos.x);
    read(p, "y", pos.y);
    c.cn_position = pos;
  }
  if (root.contains("energy")) {
    const json& e = root["energy"];
    reject_unknown(e, {"e_elec", "eps_amp", "e_agg", "packet_bits", "ctrl_bits"}, "energy");
    read(e, "e_elec", c.energy.e_elec);
    read(e, "eps_amp", c.energy.eps_amp);
    read(e, "e_agg", c.energy.e_agg);
    read(e, "packet_bits", c.energy.packet_bits);
    read(e, "ctrl_bits", c.energy.ctrl_bits);
  }
  if (root.contains("weights")) {
    const json& w = root["weights"];
    reject_unknown(w, {"energy", "distance", "reliability", "mobility"}, "weights");
    read(w, "energy", c.weights.energy);
    read(w, "distance", c.weights.distance);
    read(w, "reliability", c.weights.reliability);
    read(w, "mobility", c.weights.mobility);
  }
  if (root.contains("mobility")) {
    const json& m = root["mobility"];
    reject_unknown(m, {"mode", "v_max", "pause", "window"}, "mobility");
    if (m.contains("mode")) {
      std::string mode;
      read(m, "mode", mode);
      c.mobility.mode = parse_mobility_mode(mode);
    }
    read(m, "v_max", c.mobility.v_max);
    read(m, "pause", c.mobility.pause);
    read(m, "window", c.mobility.window);
  }
  c.validate();
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SimConfig& c) {
  json j;
  j["field_width"] = c.field_width;
  j["field_height"] = c.field_height;
  j["cluster_count"] = c.cluster_count;
  j["nodes_per_cluster"] = c.nodes_per_cluster;
  j["topology"] = to_string(c.topology);
  j["cluster_spread"] = c.cluster_spread;
  j["cn_position"] = c.cn_position ? json{{"x", c.cn_position->x}, {"y", c.cn_position->y}}
                                   : json(nullptr);
  j["r"] = c.r;
  j["initial_energy"] = c.initial_energy;
  j["energy"] = {{"e_elec", c.energy.e_elec},
                 {"eps_amp", c.energy.eps_amp},
                 {"e_agg", c.energy.e_agg},
                 {"packet_bits", c.energy.packet_bits},
                 {"ctrl_bits", c.energy.ctrl_bits}};
  j["weights"] = {{"energy", c.weights.energy},
                  {"distance", c.weights.distance},
                  {"reliability", c.weights.reliability},
                  {"mobility", c.weights.mobility}};
  j["mobility"] = {{"mode", to_string(c.mobility.mode)},
                   {"v_max", c.mobility.v_max},
                   {"pause", c.mobility.pause},
                   {"window", c.mobility.window}};
  j["failure_rate"] = c.failure_rate;
  j["max_rounds"] = c.max_rounds;
  j["seed"] = c.seed;
  j["scheme"] = to_string(c.scheme);
  return j.dump(2);
}

void write_metrics_csv(std::ostream& out, const std::vector<RoundMetrics>& rounds) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& m : rounds) {
    out << m.round << ',' << m.alive << ',' << fmt9(m.total_residual) << ','
        << fmt9(m.residual_variance) << ',' << m.messages_data << ',' << m.messages_ctrl << ','
        << m.reselection_events << ',';
    for (std::size_t i = 0; i < m.ch_ids.size(); ++i) {
      if (i) out << ';';
      if (m.ch_ids[i]) {
        out << *m.ch_ids[i];
      } else {
        out << '-';
      }
    }
    out << '\n';
  }
}

std::vector<RoundMetrics> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsCsvHeader) {
    throw std::runtime_error("metrics CSV: missing or unexpected header");
  }
  std::vector<RoundMetrics> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() == 7 && !line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 8) throw std::runtime_error("metrics CSV: expected 8 fields: " + line);
    RoundMetrics m;
    m.round = std::stoi(f[0]);
    m.alive = std::stoi(f[1]);
    m.total_residual = std::stod(f[2]);
    m.residual_variance = std::stod(f[3]);
    m.messages_data = std::stoull(f[4]);
    m.messages_ctrl = std::stoull(f[5]);
    m.reselection_events = std::stoi(f[6]);
    if (!f[7].empty()) {
      std::stringstream ids(f[7]);
      std::string id;
      while (std::getline(ids, id, ';')) {
        if (id == "-") {
          m.ch_ids.emplace_back(std::nullopt);
        } else {
          m.ch_ids.emplace_back(static_cast<NodeId>(std::stoul(id)));
        }
      }
    }
    rows.push_back(std::move(m));
  }
  return rows;
}

RoundMetrics as_printed(const RoundMetrics& m) {
  RoundMetrics r = m;
  r.total_residual = std::stod(fmt9(m.total_residual));
  r.residual_variance = std::stod(fmt9(m.residual_variance));
  return r;
}

void write_comparison_csv(std::ostream& out, const Comparison& cmp) {
  const std::string a = to_string(cmp.scheme_a);
  const std::string b = to_string(cmp.scheme_b);
  out << "replication,seed,checkpoint_round," << a << "_first_death," << b << "_first_death," << a
      << "_variance," << b << "_variance\n";
  for (const auto& r : cmp.rows) {
    out << r.replication << ',' << r.seed << ',' << r.checkpoint_round << ',' << r.first_death_a
        << ',' << r.first_death_b << ',' << fmt9(r.variance_a) << ',' << fmt9(r.variance_b)
        << '\n';
  }
}

}  // namespace wsn
