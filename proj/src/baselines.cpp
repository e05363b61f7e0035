#include "samstream/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "samstream/knn.hpp"

namespace samstream {

WindowKnn::WindowKnn(std::size_t capacity, std::size_t k, bool distance_weighted)
    : capacity_(capacity), k_(k), weighted_(distance_weighted) {
    if (capacity_ < 1) throw std::invalid_argument("WindowKnn: capacity must be at least 1");
    if (k_ < 1) throw std::invalid_argument("WindowKnn: k must be at least 1");
}

double WindowKnn::predict(std::span<const double> features) const {
    if (window_.empty()) return 0.0;
    return knn_predict(window_, features, k_, weighted_);
}

double WindowKnn::step(const Sample& sample) {
    const double prediction = predict(sample.features);
    window_.push_back(sample);
    if (window_.size() > capacity_) window_.drop_oldest(window_.size() - capacity_);
    return prediction;
}

OnlineLinear::OnlineLinear(std::size_t dim, double learning_rate, bool standardize)
    : weights_(dim, 0.0), eta_(learning_rate), standardize_(standardize) {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("OnlineLinear: learning rate must be finite and >= 0");
    }
}

double OnlineLinear::predict(std::span<const double> features) const {
    if (features.size() != weights_.size()) {
        throw std::invalid_argument("OnlineLinear: feature arity mismatch");
    }
    std::vector<double> scaled;
    if (standardize_) {
        scaled = scaler_.transform(features);
        features = scaled;
    }
    double value = bias_;
    for (std::size_t i = 0; i < weights_.size(); ++i) value += weights_[i] * features[i];
    return value;
}

double OnlineLinear::step(const Sample& sample) {
    if (sample.features.size() != weights_.size()) {
        throw std::invalid_argument("OnlineLinear: feature arity mismatch");
    }
    std::vector<double> inputs(sample.features.begin(), sample.features.end());
    if (standardize_) {
        inputs = scaler_.transform(sample.features);
        scaler_.observe(sample.features);
    }
    double prediction = bias_;
    for (std::size_t i = 0; i < weights_.size(); ++i) prediction += weights_[i] * inputs[i];

    const double grad = 2.0 * (prediction - sample.target);
    bool finite = true;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        weights_[i] -= eta_ * grad * inputs[i];
        finite = finite && std::isfinite(weights_[i]);
    }
    bias_ -= eta_ * grad;
    finite = finite && std::isfinite(bias_);
    if (!finite) throw std::runtime_error("OnlineLinear: weights diverged");
    return prediction;
}

}  // namespace samstream
