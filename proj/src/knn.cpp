#include "samstream/knn.hpp"

#include <algorithm>
#include <cmath>

namespace samstream {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("squared_distance: vector length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

namespace detail {

bool TopK::offer(double dist_sq, std::int64_t index, double target, std::size_t pos) {
    if (items_.size() == k_ && !before(dist_sq, index, items_.back())) return false;
    if (items_.size() == k_) items_.pop_back();
    Item item{dist_sq, index, target, pos};
    auto at = std::upper_bound(items_.begin(), items_.end(), item, [](const Item& a, const Item& b) {
        return a.dist_sq < b.dist_sq || (a.dist_sq == b.dist_sq && a.index < b.index);
    });
    items_.insert(at, item);
    return true;
}

double TopK::mean_target() const {
    if (items_.empty()) throw std::logic_error("TopK: no neighbors selected");
    double sum = 0.0;
    for (const Item& it : items_) sum += it.target;
    return sum / static_cast<double>(items_.size());
}

double TopK::weighted_target() const {
    if (items_.empty()) throw std::logic_error("TopK: no neighbors selected");
    constexpr double kEps = 1e-12;
    double num = 0.0, den = 0.0;
    for (const Item& it : items_) {
        const double w = 1.0 / (std::sqrt(it.dist_sq) + kEps);
        num += w * it.target;
        den += w;
    }
    return num / den;
}

}  // namespace detail

NeighborResult k_nearest(const MemorySet& memory, std::span<const double> query, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k_nearest: k must be at least 1");
    if (memory.empty()) throw std::logic_error("k_nearest: memory is empty");

    detail::TopK top(k);
    for (std::size_t pos = 0; pos < memory.size(); ++pos) {
        const Sample& s = memory[pos];
        top.offer(squared_distance(query, s.features), s.index, s.target, pos);
    }
    NeighborResult out;
    out.entries.reserve(top.size());
    for (const auto& item : top.items()) {
        out.entries.push_back({item.pos, std::sqrt(item.dist_sq)});
    }
    return out;
}

double knn_predict(const MemorySet& memory, std::span<const double> query, std::size_t k,
                   bool distance_weighted) {
    if (k < 1) throw std::invalid_argument("knn_predict: k must be at least 1");
    if (memory.empty()) throw std::logic_error("knn_predict: memory is empty");

    detail::TopK top(k);
    for (std::size_t pos = 0; pos < memory.size(); ++pos) {
        const Sample& s = memory[pos];
        top.offer(squared_distance(query, s.features), s.index, s.target, pos);
    }
    return top.predict(distance_weighted);
}

}  // namespace samstream
