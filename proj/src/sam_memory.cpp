#include "samstream/sam_memory.hpp"

#include <algorithm>
#include <cmath>

#include "samstream/knn.hpp"

namespace samstream {

MemorySet combined_view(const MemorySet& stm, const MemorySet& ltm) {
    return MemorySet::merged(stm, ltm);
}

std::vector<std::size_t> candidate_windows(std::size_t stm_size, std::size_t min_size) {
    if (stm_size < min_size) {
        throw std::logic_error("candidate_windows: STM smaller than its minimum size");
    }
    std::vector<std::size_t> lengths;
    for (std::size_t l = stm_size; l >= min_size; l /= 2) {
        lengths.push_back(l);
        if (l == 0) break;
    }
    return lengths;
}

double window_itte(const MemorySet& window, std::size_t k, bool distance_weighted) {
    if (window.size() < k + 1) {
        throw std::logic_error("window_itte: window must hold more than k samples");
    }
    double sum_sq = 0.0;
    for (std::size_t i = k; i < window.size(); ++i) {
        detail::TopK top(k);
        for (std::size_t j = 0; j < i; ++j) {
            const Sample& s = window[j];
            top.offer(squared_distance(window[i].features, s.features), s.index, s.target, j);
        }
        const double residual = top.predict(distance_weighted) - window[i].target;
        sum_sq += residual * residual;
    }
    return std::sqrt(sum_sq / static_cast<double>(window.size() - k));
}

AdaptResult adapt_stm(SamMemories& mem, std::size_t k, bool distance_weighted) {
    const std::size_t m = mem.stm.size();
    const auto lengths = candidate_windows(m, mem.min_stm);

    std::size_t best_length = lengths.front();
    double best_error = kInfinity;
    for (std::size_t length : lengths) {  // largest first, so ties keep the largest
        const double err = window_itte(mem.stm.suffix(length), k, distance_weighted);
        if (err < best_error) {
            best_error = err;
            best_length = length;
        }
    }

    AdaptResult result;
    result.new_length = best_length;
    if (best_length < m) {
        result.discarded = mem.stm.prefix(m - best_length);
        mem.stm = mem.stm.suffix(best_length);
    }
    return result;
}

namespace {

struct PivotContext {
    double radius = 0.0;        // max distance among the pivot's k neighbors
    double max_weighted = 0.0;  // max weighted |target difference| among them
    bool usable = false;        // false when radius == 0: nothing qualifies
};

PivotContext pivot_context(const MemorySet& b, const Sample& pivot, std::size_t k) {
    detail::TopK top(k);
    for (std::size_t pos = 0; pos < b.size(); ++pos) {
        const Sample& s = b[pos];
        if (s.index == pivot.index) continue;
        top.offer(squared_distance(pivot.features, s.features), s.index, s.target, pos);
    }
    if (top.size() < k) {
        throw std::logic_error("clean: reference set must hold more than k samples");
    }

    PivotContext ctx;
    ctx.radius = std::sqrt(top.items().back().dist_sq);
    if (ctx.radius == 0.0) return ctx;  // duplicated pivot: strict radius keeps C empty
    ctx.usable = true;
    for (const auto& item : top.items()) {
        const double d = std::sqrt(item.dist_sq);
        const double w = std::abs(pivot.target - item.target) / std::exp(d / ctx.radius);
        ctx.max_weighted = std::max(ctx.max_weighted, w);
    }
    return ctx;
}

// Marks dead every alive sample of `a` struck by this pivot. Removal
// decisions are per-sample, so folding pivots equals one masked pass.
void apply_pivot(const MemorySet& a, std::vector<char>& alive, const Sample& pivot,
                 const PivotContext& ctx) {
    if (!ctx.usable) return;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!alive[i]) continue;
        const double d = distance(pivot.features, a[i].features);
        if (d >= ctx.radius) continue;
        const double w = std::abs(pivot.target - a[i].target) / std::exp(d / ctx.radius);
        if (w > ctx.max_weighted) alive[i] = 0;
    }
}

}  // namespace

MemorySet clean_one(const MemorySet& a, const MemorySet& b, const Sample& pivot, std::size_t k) {
    if (b.size() < k + 1) {
        throw std::logic_error("clean_one: reference set must hold more than k samples");
    }
    if (!b.contains_index(pivot.index)) {
        throw std::invalid_argument("clean_one: pivot must be a member of the reference set");
    }
    std::vector<char> alive(a.size(), 1);
    apply_pivot(a, alive, pivot, pivot_context(b, pivot, k));
    return a.filtered(alive);
}

MemorySet clean_set(const MemorySet& a, const MemorySet& b, std::size_t k) {
    if (b.size() < k + 1) {
        throw std::logic_error("clean_set: reference set must hold more than k samples");
    }
    std::vector<char> alive(a.size(), 1);
    for (const Sample& pivot : b) {
        apply_pivot(a, alive, pivot, pivot_context(b, pivot, k));
    }
    return a.filtered(alive);
}

namespace {

// Two smallest distances from sample `i` to other alive samples.
struct TwoNearest {
    double d1 = kInfinity, d2 = kInfinity;
    std::size_t i1 = 0, i2 = 0;

    void offer(double d, std::size_t j) {
        if (d < d1) {
            d2 = d1;
            i2 = i1;
            d1 = d;
            i1 = j;
        } else if (d < d2) {
            d2 = d;
            i2 = j;
        }
    }

    double sum() const {
        double s = 0.0;
        if (d1 != kInfinity) s += d1;
        if (d2 != kInfinity) s += d2;
        return s;
    }
};

TwoNearest scan_two_nearest(const MemorySet& set, const std::vector<char>& alive, std::size_t i) {
    TwoNearest nn;
    for (std::size_t j = 0; j < set.size(); ++j) {
        if (j == i || !alive[j]) continue;
        nn.offer(distance(set[i].features, set[j].features), j);
    }
    return nn;
}

}  // namespace

MemorySet compress_ltm(MemorySet ltm, std::size_t max_size) {
    if (ltm.size() <= max_size) return ltm;

    std::vector<char> alive(ltm.size(), 1);
    std::vector<TwoNearest> nn(ltm.size());
    for (std::size_t i = 0; i < ltm.size(); ++i) nn[i] = scan_two_nearest(ltm, alive, i);

    std::size_t remaining = ltm.size();
    while (remaining > max_size) {
        std::size_t victim = ltm.size();
        double best = kInfinity;
        for (std::size_t i = 0; i < ltm.size(); ++i) {  // ascending index: ties keep the first
            if (!alive[i]) continue;
            const double s = nn[i].sum();
            if (s < best) {
                best = s;
                victim = i;
            }
        }
        alive[victim] = 0;
        --remaining;
        if (remaining <= max_size) break;
        for (std::size_t i = 0; i < ltm.size(); ++i) {
            if (!alive[i]) continue;
            if (nn[i].i1 == victim || nn[i].i2 == victim) {
                nn[i] = scan_two_nearest(ltm, alive, i);
            }
        }
    }
    return ltm.filtered(alive);
}

void absorb_discarded(SamMemories& mem, const MemorySet& discarded, std::size_t k) {
    const MemorySet cleaned = clean_set(discarded, mem.stm, k);
    mem.ltm = MemorySet::merged(mem.ltm, cleaned);
    mem.ltm = clean_set(mem.ltm, mem.stm, k);
    if (mem.ltm.size() > mem.max_ltm) {
        mem.ltm = compress_ltm(std::move(mem.ltm), mem.max_ltm);
    }
}

}  // namespace samstream
