#pragma once

#include <span>
#include <vector>

#include "samstream/core.hpp"

namespace samstream {

// Fixed-capacity sliding-window kNN regressor wrapped as an online learner.
class WindowKnn {
  public:
    explicit WindowKnn(std::size_t capacity = 1000, std::size_t k = 5,
                       bool distance_weighted = false);

    // kNN prediction over the window; 0 while the window is empty.
    double predict(std::span<const double> features) const;

    // Predict, then store the sample (FIFO eviction beyond capacity).
    double step(const Sample& sample);

    const MemorySet& window() const { return window_; }

  private:
    std::size_t capacity_;
    std::size_t k_;
    bool weighted_;
    MemorySet window_;
};

// Online linear regression trained by stochastic gradient descent on the
// squared loss, optionally over running z-scored inputs.
class OnlineLinear {
  public:
    explicit OnlineLinear(std::size_t dim, double learning_rate = 0.01, bool standardize = false);

    double predict(std::span<const double> features) const;

    // Predict, then take one gradient step. Throws std::runtime_error when
    // the weights stop being finite (divergence).
    double step(const Sample& sample);

    std::span<const double> weights() const { return weights_; }
    double bias() const { return bias_; }

  private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    double eta_;
    bool standardize_;
    RunningScaler scaler_;
};

}  // namespace samstream
