#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "samstream/core.hpp"

namespace samstream::detail {

// Incremental evaluator of the prequential error of every candidate STM
// suffix window. Recomputing window_itte for all candidates from scratch is
// O(m^2) distance work per step, which does not survive long streams; this
// structure maintains the same numbers in O(m) per step.
//
// It exploits the fact that the kNN prediction of a stored sample i, taken
// over the preceding window samples [s, i), changes with the window start s
// only at the few positions where a closer neighbor enters. When sample i is
// inserted, one backward scan over the current STM records those prediction
// changepoints, and each changepoint also deposits, at the position whose
// departure triggers it, the squared residual that becomes valid once the
// window start passes that position. Candidate windows then keep a deque of
// squared residuals: sliding the start pops the oldest term and patches the
// deposited ones; growing just appends the newest term.
//
// All predictions flow through the same TopK selector as the public kNN
// operations and the per-window sums run in ascending sample order, so the
// reported errors equal a from-scratch window_itte evaluation bit for bit.
class WindowIndex {
  public:
    WindowIndex(std::size_t k, std::size_t min_stm, bool distance_weighted = false);

    // Rebuilds everything from the given STM (used at regressor init).
    void reset(const MemorySet& stm);

    // The STM grew by one sample (scan happens against the pre-append STM).
    void append(const Sample& sample);

    // The STM dropped its n oldest samples without window adaptation.
    void evict_front(std::size_t n);

    // Brings every candidate window up to date with the current STM extent.
    // Call once per step, after append()/evict_front().
    void advance();

    struct Candidate {
        std::size_t length = 0;
        double itte = 0.0;
    };

    // Current candidate evaluations, largest window first (same order as
    // candidate_windows).
    std::vector<Candidate> evaluate() const;

    // The STM shrank to its suffix of the given length.
    void shrink_to(std::size_t length);

    std::size_t stm_size() const { return static_cast<std::size_t>(stm_end_ - stm_begin_); }

  private:
    struct Changepoint {
        std::int64_t start = 0;  // largest window start this prediction is valid for
        double prediction = 0.0;
    };
    struct Deposit {
        std::int64_t sample = 0;  // arena position of the affected sample
        double sq_residual = 0.0;
    };
    struct Slot {
        Sample sample;
        std::vector<Changepoint> changepoints;  // ascending by start
        std::vector<Deposit> deposits;          // keyed by this slot's position
    };
    struct ClassState {
        std::int64_t start = 0;
        std::deque<double> terms;  // squared residuals for samples [start+k, stm_end)
    };

    const Slot& slot(std::int64_t pos) const {
        return arena_[static_cast<std::size_t>(pos - arena_base_)];
    }
    Slot& slot(std::int64_t pos) { return arena_[static_cast<std::size_t>(pos - arena_base_)]; }

    double prediction_at(std::int64_t pos, std::int64_t start) const;
    double term_at(std::int64_t pos, std::int64_t start) const;
    void slide_one(ClassState& cls);
    void push_newest_term(ClassState& cls);
    ClassState build_class(std::size_t length) const;
    std::size_t class_count(std::size_t m) const;
    void maybe_compact();

    std::size_t k_;
    std::size_t min_stm_;
    bool weighted_;

    std::vector<Slot> arena_;
    std::int64_t arena_base_ = 0;
    std::int64_t stm_begin_ = 0;
    std::int64_t stm_end_ = 0;
    std::vector<ClassState> classes_;
};

}  // namespace samstream::detail
