#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace samstream {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool all_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

// One time-step observation: sensor readings plus the scalar to predict.
struct Sample {
    std::vector<double> features;
    double target = 0.0;
    std::int64_t index = 0;
};

// Ordered collection of samples backing one kNN sub-model. Insertion order
// equals time order; indices are strictly increasing and every component is
// finite (enforced at admission).
class MemorySet {
  public:
    MemorySet() = default;
    explicit MemorySet(std::vector<Sample> samples);

    void push_back(Sample sample);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const Sample& operator[](std::size_t pos) const { return samples_[pos]; }
    const Sample& front() const { return samples_.front(); }
    const Sample& back() const { return samples_.back(); }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    // Copy of the n oldest / most recent samples.
    MemorySet prefix(std::size_t n) const;
    MemorySet suffix(std::size_t n) const;

    void drop_oldest(std::size_t n);

    // Keeps samples_[i] where alive[i] is nonzero.
    MemorySet filtered(const std::vector<char>& alive) const;

    bool contains_index(std::int64_t index) const;

    // Union by time index; a sample appearing in both sides is kept once.
    static MemorySet merged(const MemorySet& a, const MemorySet& b);

  private:
    void validate_admission(const Sample& sample) const;

    std::vector<Sample> samples_;
};

// Per-dimension running z-score statistics (Welford).
class RunningScaler {
  public:
    void observe(std::span<const double> values);

    // (x - mean) / sd with the statistics seen so far; identity before the
    // first observation, sd of 1 where the variance is zero.
    std::vector<double> transform(std::span<const double> values) const;

    std::size_t count() const { return count_; }

  private:
    std::size_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

// Running prequential error: the RMSE of every residual seen so far, or of
// the last `window_capacity` residuals when a capacity is given.
class ErrorTracker {
  public:
    ErrorTracker() = default;
    explicit ErrorTracker(std::size_t window_capacity) : capacity_(window_capacity) {}

    void record(double residual);

    // sqrt(sum_sq / count); +inf sentinel while no residual has been seen,
    // so an untrained sub-model never wins best-memory selection.
    double itte() const;

    std::size_t count() const { return capacity_ == 0 ? count_ : window_.size(); }
    double sum_squares() const;

  private:
    std::size_t capacity_ = 0;
    std::size_t count_ = 0;
    double sum_sq_ = 0.0;
    std::deque<double> window_;
};

}  // namespace samstream
