#pragma once

#include <span>
#include <vector>

#include "okm/metric.hpp"

namespace okm {

// Whether candidate median locations are fixed up front (static F) or
// coincide with the arriving clients (F = C).
enum class FacilityMode { kStaticF, kFEqualsC };

// Snapshot of a k-median-with-outliers problem: pick k medians out of
// `facilities`, serve `clients`, and discard up to z of them.
//
// The space is borrowed, never owned. Facility and client lists are ordered;
// algorithms address facilities by their *ordinal* (index into `facilities`),
// which is what makes tie-breaking and canonical enumeration deterministic.
struct Instance {
    const MetricSpace* space = nullptr;
    std::vector<PointId> facilities;
    std::vector<PointId> clients;
    int k = 0;
    int z = 0;
};

// A concrete solution: the chosen medians and the clients written off as
// outliers. Both lists are sorted by point id.
struct Solution {
    std::vector<PointId> medians;
    std::vector<PointId> outliers;
};

// Per-step record of median changes across a run.
//
// Each entry holds the net set difference of one time step, so `added` is
// S_t \ S_{t-1} even when several swaps run within the same step (a median
// swapped in and back out inside one step contributes nothing). The running
// total counts additions only; the removed sets are kept so the two-sided
// variant can be reported as well.
class RecourseLog {
public:
    struct Entry {
        int t = 0;
        std::vector<int> added;    // facility ordinals, sorted
        std::vector<int> removed;  // facility ordinals, sorted
    };

    void record_swap(int t, std::span<const int> incoming, std::span<const int> outgoing);
    void record_addition(int t, int ordinal);

    long total() const { return total_; }
    long total_two_sided() const;

    // Additions recorded for step t (0 if the step changed nothing).
    int additions_at(int t) const;

    const std::vector<Entry>& entries() const { return entries_; }

private:
    Entry& entry_for(int t);

    std::vector<Entry> entries_;
    long total_ = 0;
};

}  // namespace okm
