#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace samstream {

enum class AnomalyKind {
    none,            // baseline only, no ground-truth window
    leak,            // smooth pressure drop on a sensor neighborhood
    overflow,        // channel ramps without bound
    gaussian_noise,  // additive noise on the channel
    constant_offset, // fixed additive offset
    stuck_zero,      // channel reads exactly zero
    shift            // small additive offset
};

const char* to_string(AnomalyKind kind);
std::optional<AnomalyKind> anomaly_kind_from(const std::string& name);

// Full description of one synthetic scenario: a seeded multivariate baseline
// plus at most one injected anomaly active on the half-open step range
// [onset, end).
struct ScenarioSpec {
    int n_sensors = 29;
    std::int64_t duration = 23000;
    std::uint64_t seed = 1;
    double noise_sd = 0.01;
    double drift_sd = 0.15;  // stationary sd of the slow demand drift; 0 disables

    AnomalyKind kind = AnomalyKind::none;
    int sensor = 0;
    std::int64_t onset = 0;
    std::int64_t end = 0;
    double magnitude = 0.0;

    void validate() const;
};

struct Scenario {
    ScenarioSpec spec;
    std::vector<std::vector<double>> observations;  // duration rows of n_sensors values
    // Inclusive step range in which the anomaly is active; absent for
    // baseline-only scenarios.
    std::optional<std::pair<std::int64_t, std::int64_t>> truth;
};

// Deterministic generation: same spec (and seed) gives a bit-identical
// stream, and outside the anomaly range the stream equals the baseline of
// the same seed exactly.
Scenario generate(const ScenarioSpec& spec);

}  // namespace samstream
