#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "samstream/core.hpp"

namespace samstream {

// Squared Euclidean distance; throws std::invalid_argument on length mismatch.
double squared_distance(std::span<const double> a, std::span<const double> b);

// Euclidean distance.
double distance(std::span<const double> a, std::span<const double> b);

// Result of a k-nearest query: positions into the queried MemorySet plus the
// distances, sorted ascending by (distance, sample index).
struct NeighborResult {
    struct Entry {
        std::size_t pos = 0;
        double distance = 0.0;
    };
    std::vector<Entry> entries;
};

namespace detail {

// Fixed-capacity selector of the k smallest candidates under the total order
// (squared distance, sample index). Every neighbor-selection path in the
// library goes through this type so that tie handling and the target
// summation order are identical everywhere, independent of scan direction.
class TopK {
  public:
    struct Item {
        double dist_sq = 0.0;
        std::int64_t index = 0;
        double target = 0.0;
        std::size_t pos = 0;
    };

    explicit TopK(std::size_t k) : k_(k) { items_.reserve(k); }

    // Returns true when the candidate entered the selection.
    bool offer(double dist_sq, std::int64_t index, double target, std::size_t pos);

    std::size_t size() const { return items_.size(); }
    const std::vector<Item>& items() const { return items_; }

    // Unweighted mean of the selected targets, summed in ascending
    // (distance, index) order.
    double mean_target() const;

    // Inverse-distance weighted mean (same summation order).
    double weighted_target() const;

    double predict(bool distance_weighted) const {
        return distance_weighted ? weighted_target() : mean_target();
    }

  private:
    bool before(double dist_sq, std::int64_t index, const Item& other) const {
        return dist_sq < other.dist_sq || (dist_sq == other.dist_sq && index < other.index);
    }

    std::size_t k_;
    std::vector<Item> items_;  // kept sorted ascending by (dist_sq, index)
};

}  // namespace detail

// The min(k, |memory|) samples with smallest distance to the query;
// deterministic tie rule: equal distances order by ascending sample index.
// Throws std::logic_error on an empty memory, std::invalid_argument for k < 1.
NeighborResult k_nearest(const MemorySet& memory, std::span<const double> query, std::size_t k);

// kNN regression: mean of the targets of the k nearest samples (unweighted by
// default, inverse-distance weighted behind the flag).
double knn_predict(const MemorySet& memory, std::span<const double> query, std::size_t k,
                   bool distance_weighted = false);

}  // namespace samstream
