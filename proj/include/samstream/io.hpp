#pragma once

#include <span>
#include <string>
#include <vector>

#include "samstream/anomaly.hpp"
#include "samstream/synth.hpp"

namespace samstream {

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

// Stream CSV: header "t,s1,...,sn", one row per raw time step.
void write_stream_csv(const std::string& path,
                      const std::vector<std::vector<double>>& observations);

// Replays a stream CSV in file order. Malformed rows raise std::runtime_error
// naming the path and line number; an empty file is an empty stream.
std::vector<std::vector<double>> read_stream_csv(const std::string& path);

// Sidecar scenario description (key-value text) next to a stream CSV.
std::string sidecar_path_for(const std::string& csv_path);
void write_scenario_sidecar(const std::string& path, const ScenarioSpec& spec);
ScenarioSpec read_scenario_sidecar(const std::string& path);

// Alarm log: "t,sensor,residual,threshold,alarm" per detector decision.
void write_alarm_log(const std::string& path, std::span<const AlarmRecord> alarms);

}  // namespace samstream
