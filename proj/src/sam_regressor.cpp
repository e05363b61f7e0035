#include "samstream/sam_regressor.hpp"

#include <stdexcept>

#include "samstream/knn.hpp"

namespace samstream {

void SamConfig::validate() const {
    if (k < 1) throw std::invalid_argument("SamConfig: k must be at least 1");
    if (min_stm < k + 1) throw std::invalid_argument("SamConfig: min_stm must exceed k");
    if (max_ltm < min_stm) throw std::invalid_argument("SamConfig: max_ltm must be >= min_stm");
    if (max_stm < min_stm) throw std::invalid_argument("SamConfig: max_stm must be >= min_stm");
    if (adapt_stride < 1) throw std::invalid_argument("SamConfig: adapt_stride must be >= 1");
}

const char* to_string(MemoryChoice choice) {
    switch (choice) {
        case MemoryChoice::stm: return "stm";
        case MemoryChoice::ltm: return "ltm";
        case MemoryChoice::cm: return "cm";
    }
    return "?";
}

SamRegressor::SamRegressor(std::vector<Sample> warmup, SamConfig cfg)
    : cfg_(cfg),
      window_index_(cfg.k, cfg.min_stm, cfg.distance_weighted),
      e_stm_(cfg.tracker_window),
      e_ltm_(cfg.tracker_window),
      e_cm_(cfg.tracker_window),
      composite_(cfg.tracker_window) {
    cfg_.validate();
    if (warmup.size() != cfg_.min_stm) {
        throw std::invalid_argument("SamRegressor: warm-up must hold exactly min_stm samples");
    }
    mem_.min_stm = cfg_.min_stm;
    mem_.max_ltm = cfg_.max_ltm;
    for (Sample& s : warmup) {
        if (cfg_.normalize) {
            std::vector<double> raw = s.features;
            s.features = scaler_.transform(raw);
            scaler_.observe(raw);
        }
        mem_.stm.push_back(std::move(s));
    }
    mem_.ltm = mem_.stm;
    window_index_.reset(mem_.stm);
    samples_seen_ = static_cast<std::int64_t>(cfg_.min_stm);
}

const ErrorTracker& SamRegressor::tracker(MemoryChoice choice) const {
    switch (choice) {
        case MemoryChoice::stm: return e_stm_;
        case MemoryChoice::ltm: return e_ltm_;
        case MemoryChoice::cm: return e_cm_;
    }
    return e_stm_;
}

double SamRegressor::cm_predict(std::span<const double> features) const {
    // Combined view without materializing it: STM indices are contiguous, so
    // an LTM sample duplicates an STM one exactly when its index falls in the
    // STM range.
    detail::TopK top(cfg_.k);
    const MemorySet& stm = mem_.stm;
    for (std::size_t pos = 0; pos < stm.size(); ++pos) {
        const Sample& s = stm[pos];
        top.offer(squared_distance(features, s.features), s.index, s.target, pos);
    }
    const std::int64_t lo = stm.front().index;
    const std::int64_t hi = stm.back().index;
    for (std::size_t pos = 0; pos < mem_.ltm.size(); ++pos) {
        const Sample& s = mem_.ltm[pos];
        if (s.index >= lo && s.index <= hi) continue;
        top.offer(squared_distance(features, s.features), s.index, s.target, pos);
    }
    return top.predict(cfg_.distance_weighted);
}

MemoryChoice SamRegressor::select_memory(bool ltm_eligible) const {
    // Tie order STM > CM > LTM; strictly lower tracked error wins.
    MemoryChoice choice = MemoryChoice::stm;
    double best = e_stm_.itte();
    if (e_cm_.itte() < best) {
        best = e_cm_.itte();
        choice = MemoryChoice::cm;
    }
    if (ltm_eligible && e_ltm_.itte() < best) {
        choice = MemoryChoice::ltm;
    }
    return choice;
}

std::pair<double, MemoryChoice> SamRegressor::predict(std::span<const double> features) const {
    std::vector<double> scaled;
    if (cfg_.normalize) {
        scaled = scaler_.transform(features);
        features = scaled;
    }
    const bool ltm_eligible = mem_.ltm.size() >= cfg_.k;
    const MemoryChoice choice = select_memory(ltm_eligible);
    double value = 0.0;
    switch (choice) {
        case MemoryChoice::stm:
            value = knn_predict(mem_.stm, features, cfg_.k, cfg_.distance_weighted);
            break;
        case MemoryChoice::ltm:
            value = knn_predict(mem_.ltm, features, cfg_.k, cfg_.distance_weighted);
            break;
        case MemoryChoice::cm:
            value = cm_predict(features);
            break;
    }
    return {value, choice};
}

StepResult SamRegressor::step(const Sample& sample) {
    if (!mem_.stm.empty() && sample.index <= mem_.stm.back().index) {
        throw std::invalid_argument("SamRegressor: sample index must be strictly increasing");
    }
    if (sample.features.size() != mem_.stm.front().features.size()) {
        throw std::invalid_argument("SamRegressor: feature arity mismatch");
    }
    if (!all_finite(sample.features) || !std::isfinite(sample.target)) {
        throw std::invalid_argument("SamRegressor: sample contains non-finite values");
    }

    Sample effective = sample;
    if (cfg_.normalize) {
        effective.features = scaler_.transform(sample.features);
        scaler_.observe(sample.features);
    }

    // Shadow predictions for all sub-models before the sample is stored.
    const double p_stm = knn_predict(mem_.stm, effective.features, cfg_.k, cfg_.distance_weighted);
    const bool ltm_eligible = mem_.ltm.size() >= cfg_.k;
    std::optional<double> p_ltm;
    if (ltm_eligible) {
        p_ltm = knn_predict(mem_.ltm, effective.features, cfg_.k, cfg_.distance_weighted);
    }
    const double p_cm = cm_predict(effective.features);

    const MemoryChoice choice = select_memory(ltm_eligible);
    double prediction = p_stm;
    if (choice == MemoryChoice::ltm) prediction = *p_ltm;
    if (choice == MemoryChoice::cm) prediction = p_cm;

    StepResult result;
    result.prediction = prediction;
    result.chosen = choice;
    result.residual = prediction - effective.target;
    result.stm_residual = p_stm - effective.target;
    result.cm_residual = p_cm - effective.target;
    if (p_ltm) result.ltm_residual = *p_ltm - effective.target;

    e_stm_.record(result.stm_residual);
    if (result.ltm_residual) e_ltm_.record(*result.ltm_residual);
    e_cm_.record(result.cm_residual);
    composite_.record(result.residual);

    mem_.stm.push_back(effective);
    window_index_.append(effective);
    if (mem_.stm.size() > cfg_.max_stm) {
        mem_.stm.drop_oldest(1);
        window_index_.evict_front(1);
    }
    window_index_.advance();

    if (++since_adapt_ >= cfg_.adapt_stride) {
        since_adapt_ = 0;
        const auto candidates = window_index_.evaluate();
        std::size_t best_length = candidates.front().length;
        double best_error = candidates.front().itte;
        for (const auto& c : candidates) {  // largest first: ties keep the largest
            if (c.itte < best_error) {
                best_error = c.itte;
                best_length = c.length;
            }
        }
        if (best_length < mem_.stm.size()) {
            MemorySet discarded = mem_.stm.prefix(mem_.stm.size() - best_length);
            mem_.stm = mem_.stm.suffix(best_length);
            window_index_.shrink_to(best_length);
            absorb_discarded(mem_, discarded, cfg_.k);
            result.shrunk = true;
        }
    }

    ++samples_seen_;
    result.stm_size = mem_.stm.size();
    result.ltm_size = mem_.ltm.size();
    return result;
}

}  // namespace samstream
