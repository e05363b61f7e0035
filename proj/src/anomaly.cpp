#include "samstream/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace samstream {

ResidualThreshold::ResidualThreshold(ThresholdConfig cfg) : cfg_(cfg) {
    if (cfg_.mode == ThresholdConfig::Mode::adaptive && cfg_.window < 1) {
        throw std::invalid_argument("ResidualThreshold: window must be at least 1");
    }
}

double ResidualThreshold::current() const {
    if (cfg_.mode == ThresholdConfig::Mode::fixed) return cfg_.fixed_value;
    if (window_.empty()) return cfg_.floor;
    const double n = static_cast<double>(window_.size());
    const double mean = sum_ / n;
    const double var = std::max(0.0, sum_sq_ / n - mean * mean);
    return std::max(cfg_.floor, mean + cfg_.c * std::sqrt(var));
}

void ResidualThreshold::observe(double residual) {
    if (cfg_.mode == ThresholdConfig::Mode::fixed) return;
    window_.push_back(residual);
    sum_ += residual;
    sum_sq_ += residual * residual;
    if (window_.size() > cfg_.window) {
        const double old = window_.front();
        window_.pop_front();
        sum_ -= old;
        sum_sq_ -= old * old;
    }
    if (++since_refresh_ >= 4096) {  // keep the subtract-drift bounded
        since_refresh_ = 0;
        sum_ = sum_sq_ = 0.0;
        for (double r : window_) {
            sum_ += r;
            sum_sq_ += r * r;
        }
    }
}

DetectionScore score_scenario(std::span<const AlarmRecord> alarms,
                              std::optional<std::pair<std::int64_t, std::int64_t>> window) {
    DetectionScore score;
    bool hit = false;
    for (const AlarmRecord& a : alarms) {
        if (!a.alarm) continue;
        if (window && a.index >= window->first && a.index <= window->second) {
            hit = true;
        } else {
            ++score.fp;
        }
    }
    if (window) {
        score.tp = hit ? 1 : 0;
        score.fn = hit ? 0 : 1;
    }
    return score;
}

const char* to_string(Method method) {
    switch (method) {
        case Method::sam: return "sam";
        case Method::knn: return "knn";
        case Method::linear: return "linear";
    }
    return "?";
}

std::optional<Method> method_from(const std::string& name) {
    for (Method m : {Method::sam, Method::knn, Method::linear}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

VirtualSensorBank::VirtualSensorBank(int n_sensors, DetectorConfig cfg) : n_(n_sensors), cfg_(cfg) {
    if (n_ < 2) throw std::invalid_argument("VirtualSensorBank: need at least 2 sensors");
    if (cfg_.method == Method::sam && cfg_.effective_warmup() < cfg_.sam.min_stm) {
        throw std::invalid_argument("VirtualSensorBank: warm-up shorter than SAM min_stm");
    }
    states_.reserve(static_cast<std::size_t>(n_));
    const auto dim = static_cast<std::size_t>(n_ - 1);
    for (int j = 0; j < n_; ++j) {
        SensorState st;
        st.threshold = ResidualThreshold(cfg_.threshold);
        if (cfg_.method == Method::knn) {
            st.knn.emplace(cfg_.knn_window, cfg_.knn_k);
        } else if (cfg_.method == Method::linear) {
            st.linear.emplace(dim, cfg_.linear_rate, cfg_.linear_standardize);
        }
        states_.push_back(std::move(st));
    }
}

std::vector<double> VirtualSensorBank::features_without(std::span<const double> observation,
                                                        std::size_t skip) {
    std::vector<double> out;
    out.reserve(observation.size() - 1);
    for (std::size_t i = 0; i < observation.size(); ++i) {
        if (i != skip) out.push_back(observation[i]);
    }
    return out;
}

std::vector<AlarmRecord> VirtualSensorBank::step(std::span<const double> observation,
                                                 std::int64_t t) {
    if (observation.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("VirtualSensorBank: observation arity mismatch");
    }
    const bool in_warmup = steps_seen_ < cfg_.effective_warmup();

    std::vector<AlarmRecord> records;
    if (!in_warmup) records.reserve(static_cast<std::size_t>(n_));

    for (int j = 0; j < n_; ++j) {
        SensorState& st = states_[static_cast<std::size_t>(j)];
        Sample sample;
        sample.features = features_without(observation, static_cast<std::size_t>(j));
        sample.target = observation[static_cast<std::size_t>(j)];
        sample.index = t;

        if (in_warmup) {
            switch (cfg_.method) {
                case Method::sam:
                    if (st.sam) {
                        st.sam->step(sample);
                    } else {
                        st.pending.push_back(std::move(sample));
                        if (st.pending.size() == cfg_.sam.min_stm) {
                            st.sam.emplace(std::move(st.pending), cfg_.sam);
                            st.pending.clear();
                        }
                    }
                    break;
                case Method::knn:
                    st.knn->step(sample);
                    break;
                case Method::linear:
                    st.linear->step(sample);
                    break;
            }
            continue;
        }

        double prediction = 0.0;
        const bool traced = cfg_.trace_sensor == j;
        TraceRow trace_row;
        switch (cfg_.method) {
            case Method::sam: {
                const StepResult r = st.sam->step(sample);
                prediction = r.prediction;
                if (traced) {
                    trace_row.has_memory = true;
                    trace_row.memory = r.chosen;
                    trace_row.stm_size = r.stm_size;
                    trace_row.ltm_size = r.ltm_size;
                    trace_row.itte_stm = st.sam->tracker(MemoryChoice::stm).itte();
                    trace_row.itte_ltm = st.sam->tracker(MemoryChoice::ltm).itte();
                    trace_row.itte_cm = st.sam->tracker(MemoryChoice::cm).itte();
                }
                break;
            }
            case Method::knn: prediction = st.knn->step(sample); break;
            case Method::linear: prediction = st.linear->step(sample); break;
        }
        if (traced) {
            trace_row.index = t;
            trace_row.prediction = prediction;
            trace_row.target = sample.target;
            trace_row.residual = prediction - sample.target;
            trace_.push_back(trace_row);
        }

        AlarmRecord rec;
        rec.index = t;
        rec.sensor = j;
        rec.residual = prediction - sample.target;
        rec.threshold = st.threshold.current();
        rec.alarm = std::abs(rec.residual) > rec.threshold;
        st.threshold.observe(rec.residual);
        st.errors.record(rec.residual);
        records.push_back(rec);
    }

    ++steps_seen_;
    return records;
}

double VirtualSensorBank::sensor_itte(int sensor) const {
    return states_.at(static_cast<std::size_t>(sensor)).errors.itte();
}

}  // namespace samstream
