#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wsn/core.hpp"
#include "wsn/harness.hpp"

namespace wsn {

/// JSON config reading and writing. Every key is optional and defaults to
/// the SimConfig default; unknown keys raise ConfigError. See
/// docs/config.md for the schema.
SimConfig parse_config(const std::string& json_text);
SimConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SimConfig& config);

inline constexpr const char* kMetricsCsvHeader =
    "round,alive,total_residual_j,residual_variance,msgs_data,msgs_ctrl,reselections,ch_ids";

/// Floating-point fields use 9 significant digits; ch_ids are
/// semicolon-delimited with '-' for a cluster without a head.
void write_metrics_csv(std::ostream& out, const std::vector<RoundMetrics>& rounds);
std::vector<RoundMetrics> read_metrics_csv(std::istream& in);

/// Rounds every floating-point field the way the CSV writer prints it.
RoundMetrics as_printed(const RoundMetrics& m);

void write_comparison_csv(std::ostream& out, const Comparison& cmp);

}  // namespace wsn
