#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "samstream/core.hpp"
#include "samstream/sam_memory.hpp"
#include "samstream/window_index.hpp"

namespace samstream {

struct SamConfig {
    std::size_t k = 5;
    std::size_t min_stm = 50;   // smallest admissible STM window
    std::size_t max_ltm = 5000; // LTM capacity (enforced by compression)
    std::size_t max_stm = 5000; // hard STM cap; overflow evicts the oldest sample
    std::size_t adapt_stride = 1;    // evaluate candidate windows every n-th sample
    std::size_t tracker_window = 0;  // 0 = cumulative error tracking
    bool distance_weighted = false;
    bool normalize = false;  // running z-score on features

    void validate() const;
};

enum class MemoryChoice { stm, ltm, cm };
const char* to_string(MemoryChoice choice);

struct StepResult {
    double prediction = 0.0;
    MemoryChoice chosen = MemoryChoice::stm;
    double residual = 0.0;  // prediction - target
    double stm_residual = 0.0;
    std::optional<double> ltm_residual;
    double cm_residual = 0.0;
    std::size_t stm_size = 0;
    std::size_t ltm_size = 0;
    bool shrunk = false;
};

// Incremental kNN regressor over a self-adjusting short-/long-term memory.
// Every step is test-then-train: all three sub-models predict the incoming
// sample before it is stored anywhere, the sub-model with the lowest tracked
// error supplies the emitted prediction, then the sample enters the STM and
// the window adaptation and cleaning machinery run.
class SamRegressor {
  public:
    // Consumes exactly cfg.min_stm warm-up samples; both memories start with
    // them and no predictions are produced for them.
    SamRegressor(std::vector<Sample> warmup, SamConfig cfg = {});

    // Pure lookahead with the current state (no mutation).
    std::pair<double, MemoryChoice> predict(std::span<const double> features) const;

    StepResult step(const Sample& sample);

    const SamMemories& memories() const { return mem_; }
    const SamConfig& config() const { return cfg_; }
    const ErrorTracker& tracker(MemoryChoice choice) const;

    // Prequential RMSE of the emitted predictions.
    double itte() const { return composite_.itte(); }
    std::int64_t samples_seen() const { return samples_seen_; }

  private:
    double cm_predict(std::span<const double> features) const;
    MemoryChoice select_memory(bool ltm_eligible) const;

    SamConfig cfg_;
    SamMemories mem_;
    detail::WindowIndex window_index_;
    ErrorTracker e_stm_, e_ltm_, e_cm_, composite_;
    RunningScaler scaler_;
    std::int64_t samples_seen_ = 0;
    std::size_t since_adapt_ = 0;
};

}  // namespace samstream
