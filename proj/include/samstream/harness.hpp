#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "samstream/anomaly.hpp"
#include "samstream/synth.hpp"

namespace samstream {

// Sliding per-dimension mean: each output averages a length-w window of raw
// observations, advancing by stride. The first output appears once w raw
// samples exist; w=1, stride=1 is the identity.
std::vector<std::vector<double>> preprocess(const std::vector<std::vector<double>>& raw,
                                            std::size_t w, std::size_t stride);

// Maps an inclusive raw-step window through the same preprocessing: an output
// step is inside the mapped window when its averaging window overlaps the raw
// one.
std::optional<std::pair<std::int64_t, std::int64_t>> map_truth_window(
    std::optional<std::pair<std::int64_t, std::int64_t>> raw_window, std::size_t w,
    std::size_t stride, std::size_t output_count);

struct RunConfig {
    std::optional<std::string> input_csv;  // replay (sidecar read when present)
    std::optional<ScenarioSpec> scenario;  // synthesize

    DetectorConfig detector;
    std::size_t pre_window = 4;
    std::size_t pre_stride = 1;
    std::size_t batch = 200;  // I/O chunking only; results are batch-invariant

    std::string label;   // scenario name used in reports
    std::string outdir;  // empty: no files written
    int trace_sensor = -1;

    void validate() const;
};

struct RunResult {
    std::string label;
    Method method = Method::sam;
    DetectionScore score;
    std::vector<AlarmRecord> alarms;
    std::vector<double> sensor_itte;
    std::int64_t steps = 0;   // preprocessed steps fed to the bank
    double seconds = 0.0;     // wall clock; reported on the console, never in files
    bool failed = false;      // regressor divergence is a failed run, not a crash
    std::string failure;
};

RunResult run_experiment(const RunConfig& config);

struct ComparisonRow {
    Method method = Method::sam;
    std::string label;
    DetectionScore score;
};

// Runs every method over the same scenario list, method-major. The inner
// lists must reference the same scenarios (matching labels, same order).
std::vector<ComparisonRow> compare_methods(const std::vector<std::vector<RunConfig>>& per_method);

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows);
void write_comparison_text(const std::string& path, const std::vector<ComparisonRow>& rows);

}  // namespace samstream
