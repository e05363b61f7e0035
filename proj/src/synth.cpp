#include "samstream/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "samstream/rng.hpp"

namespace samstream {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

const char* to_string(AnomalyKind kind) {
    switch (kind) {
        case AnomalyKind::none: return "none";
        case AnomalyKind::leak: return "leak";
        case AnomalyKind::overflow: return "overflow";
        case AnomalyKind::gaussian_noise: return "gaussian_noise";
        case AnomalyKind::constant_offset: return "constant_offset";
        case AnomalyKind::stuck_zero: return "stuck_zero";
        case AnomalyKind::shift: return "shift";
    }
    return "?";
}

std::optional<AnomalyKind> anomaly_kind_from(const std::string& name) {
    for (AnomalyKind k : {AnomalyKind::none, AnomalyKind::leak, AnomalyKind::overflow,
                          AnomalyKind::gaussian_noise, AnomalyKind::constant_offset,
                          AnomalyKind::stuck_zero, AnomalyKind::shift}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

void ScenarioSpec::validate() const {
    if (n_sensors < 2) throw std::invalid_argument("ScenarioSpec: need at least 2 sensors");
    if (duration < 1) throw std::invalid_argument("ScenarioSpec: duration must be positive");
    if (!(noise_sd >= 0.0)) throw std::invalid_argument("ScenarioSpec: noise_sd must be >= 0");
    if (!(drift_sd >= 0.0)) throw std::invalid_argument("ScenarioSpec: drift_sd must be >= 0");
    if (kind == AnomalyKind::none) return;
    if (sensor < 0 || sensor >= n_sensors) {
        throw std::invalid_argument("ScenarioSpec: anomaly sensor out of range");
    }
    if (onset < 0 || onset >= end || end > duration) {
        throw std::invalid_argument("ScenarioSpec: anomaly window must satisfy 0 <= onset < end <= duration");
    }
    if (!std::isfinite(magnitude)) throw std::invalid_argument("ScenarioSpec: magnitude must be finite");
}

namespace {

constexpr std::int64_t kStepsPerDay = 288;  // five-minute sampling
constexpr std::int64_t kStepsPerWeek = 7 * kStepsPerDay;

// Per-sensor response to the latent demand state. Each sensor reads its own
// mixture of the slow demand and a fast shared pulsation, bent by a
// sinusoidal term. The distinct mixtures and bends leave no linear map from
// the other channels onto a target channel, while every channel stays a
// smooth function of the same two latent signals and hence remains
// kNN-predictable from the others. The pulsation period is short and
// incommensurate with the daily cycle, so memory-based models see its full
// range quickly at every demand level.
struct SensorParams {
    double level = 0.0;
    double demand_gain = 0.0;
    double pulse_gain = 0.0;
    double curve_amp = 0.0;
    double curve_freq = 0.0;
    double curve_phase = 0.0;

    double value(double demand, double pulse) const {
        const double mix = demand + pulse_gain * pulse;
        return level - demand_gain * mix +
               curve_amp * std::sin(2.0 * std::numbers::pi * curve_freq * mix + curve_phase);
    }
};

double fast_pulse(std::int64_t t) {
    return 0.25 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 37.3);
}

double seasonal_demand(std::int64_t t) {
    const double daily =
        std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(kStepsPerDay));
    const double weekly =
        std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(kStepsPerWeek) + 1.0);
    return 1.0 + 0.3 * daily + 0.1 * weekly;
}

// Slow mean-reverting consumption drift on top of the seasonal pattern, so
// the stream never repeats exactly and short windows keep meeting demand
// levels they have not stored. Correlation time ~2000 steps.
struct DemandDrift {
    double state = 0.0;
    double rho = 0.9995;
    double step_sd;

    explicit DemandDrift(double stationary_sd)
        : step_sd(stationary_sd * std::sqrt(1.0 - rho * rho)) {}

    double advance(Rng& rng) {
        state = rho * state + rng.normal(0.0, step_sd);
        return state;
    }
};

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
    spec.validate();

    Rng param_rng(spec.seed);
    Rng noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    Rng anomaly_rng(spec.seed ^ 0xbf58476d1ce4e5b9ull);
    Rng drift_rng(spec.seed ^ 0x94d049bb133111ebull);

    const auto n = static_cast<std::size_t>(spec.n_sensors);
    std::vector<SensorParams> sensors(n);
    for (auto& p : sensors) {
        p.level = param_rng.uniform(4.0, 8.0);
        p.demand_gain = param_rng.uniform(0.4, 1.2);
        p.pulse_gain = param_rng.uniform(0.4, 1.4);
        p.curve_amp = param_rng.uniform(0.3, 0.8);
        p.curve_freq = param_rng.uniform(0.8, 1.8);
        p.curve_phase = param_rng.uniform(0.0, 2.0 * std::numbers::pi);
    }

    Scenario out;
    out.spec = spec;
    out.observations.resize(static_cast<std::size_t>(spec.duration));

    DemandDrift drift(spec.drift_sd);
    for (std::int64_t t = 0; t < spec.duration; ++t) {
        const double demand = seasonal_demand(t) + drift.advance(drift_rng);
        const double pulse = fast_pulse(t);
        auto& row = out.observations[static_cast<std::size_t>(t)];
        row.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = sensors[i].value(demand, pulse) + noise_rng.normal(0.0, spec.noise_sd);
        }

        if (spec.kind == AnomalyKind::none || t < spec.onset || t >= spec.end) continue;

        const auto target = static_cast<std::size_t>(spec.sensor);
        switch (spec.kind) {
            case AnomalyKind::leak: {
                // Leak sensor plus two coupled neighbors, geometrically
                // decaying drop with a one-day ramp-in.
                const double ramp =
                    std::min(1.0, static_cast<double>(t - spec.onset + 1) / static_cast<double>(kStepsPerDay));
                double factor = 1.0;
                for (int hop = 0; hop < 3; ++hop) {
                    const std::size_t j = (target + static_cast<std::size_t>(hop)) % n;
                    row[j] -= spec.magnitude * factor * ramp;
                    factor *= 0.5;
                }
                break;
            }
            case AnomalyKind::overflow:
                // Accelerating runaway (doubling every ~60 steps): a plain
                // linear ramp never outruns a trailing mean + c*sd detector.
                row[target] +=
                    spec.magnitude * (std::exp2(static_cast<double>(t - spec.onset + 1) / 60.0) - 1.0);
                break;
            case AnomalyKind::gaussian_noise:
                row[target] += anomaly_rng.normal(0.0, spec.magnitude);
                break;
            case AnomalyKind::constant_offset:
            case AnomalyKind::shift:
                row[target] += spec.magnitude;
                break;
            case AnomalyKind::stuck_zero:
                row[target] = 0.0;
                break;
            case AnomalyKind::none:
                break;
        }
    }

    if (spec.kind != AnomalyKind::none) {
        out.truth = std::make_pair(spec.onset, spec.end - 1);
    }
    return out;
}

}  // namespace samstream
