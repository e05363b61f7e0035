#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "samstream/baselines.hpp"
#include "samstream/core.hpp"
#include "samstream/sam_regressor.hpp"

namespace samstream {

struct ThresholdConfig {
    enum class Mode { fixed, adaptive };
    Mode mode = Mode::adaptive;
    double c = 4.0;            // adaptive: mean + c * sd over the trailing window
    double floor = 0.05;       // adaptive lower bound
    std::size_t window = 1000; // trailing residual window
    double fixed_value = 0.5;
};

// Residual threshold over a trailing window of raw residuals.
class ResidualThreshold {
  public:
    explicit ResidualThreshold(ThresholdConfig cfg = {});

    double current() const;
    void observe(double residual);

  private:
    ThresholdConfig cfg_;
    std::deque<double> window_;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
    std::size_t since_refresh_ = 0;
};

// One detector decision for one virtual sensor at one step.
struct AlarmRecord {
    std::int64_t index = 0;
    int sensor = 0;
    double residual = 0.0;
    double threshold = 0.0;
    bool alarm = false;
};

// Scenario-level detection outcome. tp/fn are absent for runs without a
// ground-truth window (false-positive-only scoring).
struct DetectionScore {
    std::optional<int> tp;
    std::optional<int> fn;
    std::int64_t fp = 0;
};

// tp = 1 iff any alarm falls inside the inclusive window, else fn = 1; every
// alarm outside the window counts as one false positive.
DetectionScore score_scenario(std::span<const AlarmRecord> alarms,
                              std::optional<std::pair<std::int64_t, std::int64_t>> window);

enum class Method { sam, knn, linear };
const char* to_string(Method method);
std::optional<Method> method_from(const std::string& name);

struct DetectorConfig {
    Method method = Method::sam;
    SamConfig sam;
    std::size_t knn_window = 1000;
    std::size_t knn_k = 5;
    double linear_rate = 0.01;
    bool linear_standardize = true;
    ThresholdConfig threshold;
    // Steps consumed before any alarm is emitted. 0 derives two daily cycles
    // (or sam.min_stm if larger): the adaptive threshold needs residual
    // history, and a uniform horizon keeps false-positive counts comparable
    // across methods.
    std::size_t warmup = 0;
    int trace_sensor = -1;  // per-step trace for one virtual sensor

    std::size_t effective_warmup() const {
        return warmup == 0 ? std::max<std::size_t>(sam.min_stm, 576) : warmup;
    }
};

// Per-step trace of one virtual sensor (rich fields are SAM-specific).
struct TraceRow {
    std::int64_t index = 0;
    double prediction = 0.0;
    double target = 0.0;
    double residual = 0.0;
    bool has_memory = false;
    MemoryChoice memory = MemoryChoice::stm;
    std::size_t stm_size = 0;
    std::size_t ltm_size = 0;
    double itte_stm = kInfinity;
    double itte_ltm = kInfinity;
    double itte_cm = kInfinity;
};

// One regressor per sensor, each predicting its channel from the other n-1
// channels of the same observation. Every step is test-then-train: the
// residual against the revealed measurement drives the alarm decision, then
// the regressor learns the true value.
class VirtualSensorBank {
  public:
    VirtualSensorBank(int n_sensors, DetectorConfig cfg);

    // Feeds one observation (length n); returns one record per sensor, or an
    // empty vector while warming up. Throws std::invalid_argument on arity
    // mismatch and propagates regressor divergence.
    std::vector<AlarmRecord> step(std::span<const double> observation, std::int64_t t);

    int sensors() const { return n_; }
    bool warmed_up() const { return steps_seen_ >= cfg_.effective_warmup(); }
    double sensor_itte(int sensor) const;
    const std::vector<TraceRow>& trace() const { return trace_; }

  private:
    struct SensorState {
        std::optional<SamRegressor> sam;
        std::optional<WindowKnn> knn;
        std::optional<OnlineLinear> linear;
        std::vector<Sample> pending;  // SAM warm-up buffer
        ResidualThreshold threshold;
        ErrorTracker errors;
    };

    static std::vector<double> features_without(std::span<const double> observation,
                                                std::size_t skip);

    int n_;
    DetectorConfig cfg_;
    std::vector<SensorState> states_;
    std::vector<TraceRow> trace_;
    std::size_t steps_seen_ = 0;
};

}  // namespace samstream
