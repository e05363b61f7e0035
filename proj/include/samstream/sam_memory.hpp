#pragma once

#include <cstddef>
#include <vector>

#include "samstream/core.hpp"

namespace samstream {

// Short- and long-term sample stores of one self-adjusting-memory regressor.
// The STM is a sliding window over the most recent samples; the LTM holds
// older samples that are still consistent with it. min_stm is the smallest
// admissible STM window, max_ltm the LTM capacity.
struct SamMemories {
    MemorySet stm;
    MemorySet ltm;
    std::size_t min_stm = 50;
    std::size_t max_ltm = 5000;
};

// Combined-memory view: stm and ltm merged by index, duplicates once.
MemorySet combined_view(const MemorySet& stm, const MemorySet& ltm);

// Candidate STM lengths m, floor(m/2), floor(m/4), ... truncated at the first
// value below min_size. Always contains m. Requires stm_size >= min_size.
std::vector<std::size_t> candidate_windows(std::size_t stm_size, std::size_t min_size);

// Prequential RMSE inside a window: each sample after the first k is
// predicted by kNN over the samples of the window that precede it.
// Throws std::logic_error when |window| < k+1.
double window_itte(const MemorySet& window, std::size_t k, bool distance_weighted = false);

struct AdaptResult {
    std::size_t new_length = 0;
    MemorySet discarded;  // samples that fell out of the window (time order)
};

// Replaces the STM by the candidate suffix window minimizing window_itte;
// ties go to the largest window. Returns the discarded prefix.
AdaptResult adapt_stm(SamMemories& mem, std::size_t k, bool distance_weighted = false);

// Cleans `a` by `b` with respect to one pivot sample of `b`: finds the k
// nearest neighbors of the pivot in b minus the pivot, derives the distance
// radius and the maximal weighted target difference among them, and removes
// from `a` the samples inside the radius whose weighted difference exceeds
// it. Requires |b| >= k+1; the pivot is identified by its index.
MemorySet clean_one(const MemorySet& a, const MemorySet& b, const Sample& pivot, std::size_t k);

// Folds clean_one over all pivots of b in ascending index order.
MemorySet clean_set(const MemorySet& a, const MemorySet& b, std::size_t k);

// Capacity enforcement: while the set exceeds max_size, removes the sample
// with the smallest sum of distances to its two nearest other samples
// (recomputed after every removal); ties by smallest index.
MemorySet compress_ltm(MemorySet ltm, std::size_t max_size);

// Post-shrink bookkeeping: discarded samples are cleaned by the new STM,
// merged into the LTM, the LTM is cleaned by the new STM, and capacity is
// enforced by compression.
void absorb_discarded(SamMemories& mem, const MemorySet& discarded, std::size_t k);

}  // namespace samstream
