#include "samstream/window_index.hpp"

#include <algorithm>
#include <cmath>

#include "samstream/knn.hpp"

namespace samstream::detail {

WindowIndex::WindowIndex(std::size_t k, std::size_t min_stm, bool distance_weighted)
    : k_(k), min_stm_(min_stm), weighted_(distance_weighted) {}

std::size_t WindowIndex::class_count(std::size_t m) const {
    std::size_t n = 0;
    for (std::size_t l = m; l >= min_stm_ && l > 0; l /= 2) ++n;
    return n;
}

void WindowIndex::reset(const MemorySet& stm) {
    arena_.clear();
    classes_.clear();
    arena_base_ = stm_begin_ = stm_end_ = 0;
    for (const Sample& s : stm) append(s);
    const std::size_t n = class_count(stm_size());
    for (std::size_t j = 0; j < n; ++j) classes_.push_back(build_class(stm_size() >> j));
}

void WindowIndex::append(const Sample& sample) {
    const std::int64_t pos = stm_end_;
    Slot incoming;
    incoming.sample = sample;

    TopK top(k_);
    double current_pred = 0.0;
    bool have_pred = false;
    for (std::int64_t p = stm_end_ - 1; p >= stm_begin_; --p) {
        const Sample& other = slot(p).sample;
        const double d2 = squared_distance(sample.features, other.features);
        if (!top.offer(d2, other.index, other.target, static_cast<std::size_t>(p - arena_base_))) {
            continue;
        }
        const double pred = top.predict(weighted_);
        if (have_pred && pred == current_pred) continue;  // same prediction: no changepoint
        if (have_pred && p <= pos - static_cast<std::int64_t>(k_) - 1) {
            const double r = current_pred - sample.target;
            slot(p).deposits.push_back({pos, r * r});
        }
        incoming.changepoints.push_back({p, pred});
        current_pred = pred;
        have_pred = true;
    }
    std::reverse(incoming.changepoints.begin(), incoming.changepoints.end());
    arena_.push_back(std::move(incoming));
    ++stm_end_;
}

void WindowIndex::evict_front(std::size_t n) {
    stm_begin_ += static_cast<std::int64_t>(n);
}

double WindowIndex::prediction_at(std::int64_t pos, std::int64_t start) const {
    const auto& cps = slot(pos).changepoints;
    auto it = std::lower_bound(cps.begin(), cps.end(), start,
                               [](const Changepoint& cp, std::int64_t v) { return cp.start < v; });
    return it->prediction;
}

double WindowIndex::term_at(std::int64_t pos, std::int64_t start) const {
    const double r = prediction_at(pos, start) - slot(pos).sample.target;
    return r * r;
}

void WindowIndex::slide_one(ClassState& cls) {
    // The term of sample start+k leaves; deposits at the departing position
    // patch every sample whose prediction loses that neighbor.
    cls.terms.pop_front();
    const std::int64_t next_start = cls.start + 1;
    for (const Deposit& dep : slot(cls.start).deposits) {
        const std::int64_t offset = dep.sample - (next_start + static_cast<std::int64_t>(k_));
        if (offset < 0) continue;
        const auto idx = static_cast<std::size_t>(offset);
        if (idx < cls.terms.size()) cls.terms[idx] = dep.sq_residual;
    }
    cls.start = next_start;
}

void WindowIndex::push_newest_term(ClassState& cls) {
    cls.terms.push_back(term_at(stm_end_ - 1, cls.start));
}

WindowIndex::ClassState WindowIndex::build_class(std::size_t length) const {
    ClassState cls;
    cls.start = stm_end_ - static_cast<std::int64_t>(length);
    for (std::int64_t i = cls.start + static_cast<std::int64_t>(k_); i < stm_end_; ++i) {
        cls.terms.push_back(term_at(i, cls.start));
    }
    return cls;
}

void WindowIndex::advance() {
    const std::size_t m = stm_size();
    const std::size_t total = class_count(m);
    const std::size_t keep = std::min(total, classes_.size());

    for (std::size_t j = 0; j < keep; ++j) {
        ClassState& cls = classes_[j];
        const std::int64_t target_start = stm_end_ - static_cast<std::int64_t>(m >> j);
        while (cls.start < target_start) slide_one(cls);
        push_newest_term(cls);
    }
    for (std::size_t j = keep; j < total; ++j) classes_.push_back(build_class(m >> j));
    maybe_compact();
}

std::vector<WindowIndex::Candidate> WindowIndex::evaluate() const {
    const std::size_t m = stm_size();
    std::vector<Candidate> out;
    out.reserve(classes_.size());
    for (std::size_t j = 0; j < classes_.size(); ++j) {
        const ClassState& cls = classes_[j];
        double sum = 0.0;
        for (double t : cls.terms) sum += t;
        out.push_back({m >> j, std::sqrt(sum / static_cast<double>(cls.terms.size()))});
    }
    return out;
}

void WindowIndex::shrink_to(std::size_t length) {
    stm_begin_ = stm_end_ - static_cast<std::int64_t>(length);
    classes_.clear();
    const std::size_t n = class_count(length);
    for (std::size_t j = 0; j < n; ++j) classes_.push_back(build_class(length >> j));
    maybe_compact();
}

void WindowIndex::maybe_compact() {
    const std::int64_t lag = stm_begin_ - arena_base_;
    if (lag < 4096 || lag < static_cast<std::int64_t>(2 * stm_size())) return;
    arena_.erase(arena_.begin(), arena_.begin() + static_cast<std::ptrdiff_t>(lag));
    arena_base_ = stm_begin_;
}

}  // namespace samstream::detail
