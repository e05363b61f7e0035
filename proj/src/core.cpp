#include "samstream/core.hpp"

#include <algorithm>

namespace samstream {

MemorySet::MemorySet(std::vector<Sample> samples) {
    for (auto& s : samples) push_back(std::move(s));
}

void MemorySet::validate_admission(const Sample& sample) const {
    if (!all_finite(sample.features) || !std::isfinite(sample.target)) {
        throw std::invalid_argument("MemorySet: sample contains non-finite values");
    }
    if (!samples_.empty()) {
        if (sample.index <= samples_.back().index) {
            throw std::invalid_argument("MemorySet: sample index must be strictly increasing");
        }
        if (sample.features.size() != samples_.back().features.size()) {
            throw std::invalid_argument("MemorySet: feature arity mismatch");
        }
    }
}

void MemorySet::push_back(Sample sample) {
    validate_admission(sample);
    samples_.push_back(std::move(sample));
}

MemorySet MemorySet::prefix(std::size_t n) const {
    MemorySet out;
    n = std::min(n, samples_.size());
    out.samples_.assign(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

MemorySet MemorySet::suffix(std::size_t n) const {
    MemorySet out;
    n = std::min(n, samples_.size());
    out.samples_.assign(samples_.end() - static_cast<std::ptrdiff_t>(n), samples_.end());
    return out;
}

void MemorySet::drop_oldest(std::size_t n) {
    n = std::min(n, samples_.size());
    samples_.erase(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n));
}

MemorySet MemorySet::filtered(const std::vector<char>& alive) const {
    if (alive.size() != samples_.size()) {
        throw std::invalid_argument("MemorySet::filtered: mask size mismatch");
    }
    MemorySet out;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (alive[i]) out.samples_.push_back(samples_[i]);
    }
    return out;
}

bool MemorySet::contains_index(std::int64_t index) const {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), index,
                               [](const Sample& s, std::int64_t v) { return s.index < v; });
    return it != samples_.end() && it->index == index;
}

MemorySet MemorySet::merged(const MemorySet& a, const MemorySet& b) {
    MemorySet out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
            out.samples_.push_back(a[i++]);
        } else if (i == a.size() || b[j].index < a[i].index) {
            out.samples_.push_back(b[j++]);
        } else {  // same index: keep one copy
            out.samples_.push_back(a[i]);
            ++i;
            ++j;
        }
    }
    return out;
}

void RunningScaler::observe(std::span<const double> values) {
    if (count_ == 0) {
        mean_.assign(values.begin(), values.end());
        m2_.assign(values.size(), 0.0);
        count_ = 1;
        return;
    }
    if (values.size() != mean_.size()) {
        throw std::invalid_argument("RunningScaler: dimension mismatch");
    }
    ++count_;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double delta = values[i] - mean_[i];
        mean_[i] += delta / static_cast<double>(count_);
        m2_[i] += delta * (values[i] - mean_[i]);
    }
}

std::vector<double> RunningScaler::transform(std::span<const double> values) const {
    std::vector<double> out(values.begin(), values.end());
    if (count_ == 0) return out;
    if (values.size() != mean_.size()) {
        throw std::invalid_argument("RunningScaler: dimension mismatch");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double var = m2_[i] / static_cast<double>(count_);
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        out[i] = (out[i] - mean_[i]) / sd;
    }
    return out;
}

void ErrorTracker::record(double residual) {
    if (!std::isfinite(residual)) {
        throw std::invalid_argument("ErrorTracker: residual must be finite");
    }
    const double sq = residual * residual;
    if (capacity_ == 0) {
        ++count_;
        sum_sq_ += sq;
    } else {
        window_.push_back(sq);
        if (window_.size() > capacity_) window_.pop_front();
    }
}

double ErrorTracker::sum_squares() const {
    if (capacity_ == 0) return sum_sq_;
    double s = 0.0;
    for (double sq : window_) s += sq;
    return s;
}

double ErrorTracker::itte() const {
    const std::size_t n = count();
    if (n == 0) return kInfinity;
    return std::sqrt(sum_squares() / static_cast<double>(n));
}

}  // namespace samstream
