#pragma once

#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "okm/instance.hpp"

namespace okm {

// Fixed additive offset carried by every cost total, so the optimum is never
// exactly zero. Added once per total, never per point.
inline constexpr double kCostOffset = 0.1;

// The current median set S together with, per client, the nearest and
// second-nearest medians under the truncated metric d_p, the exact cost_p
// total, and the outlier count.
//
// Medians are addressed by facility ordinal. Nearness ties always go to the
// lower ordinal, so queries have a single answer and an incrementally
// maintained ledger reproduces a from-scratch rebuild field for field. To keep
// that equality exact in floating point, the cached connection sum is re-run
// as a left-to-right sum over clients whenever an operation may change
// existing assignments; appends extend the sum, which is already exact.
//
// Mutations are single-writer. swap_delta() is a pure read.
class AssignmentLedger {
public:
    struct Assignment {
        int nearest = -1;        // facility ordinal; -1 while S is empty
        int second = -1;         // facility ordinal; -1 while |S| < 2
        double nearest_d = 0.0;  // d_p(j, S); equals p when S is empty
        double second_d = 0.0;   // min over S minus the nearest median; p when |S| < 2

        bool operator==(const Assignment&) const = default;
    };

    // Builds the ledger for (instance, S, p) from scratch. `median_ordinals`
    // are indices into instance.facilities; S must not repeat and may be
    // smaller than k only during warm-up. The instance is borrowed and C grows
    // through insert_client().
    AssignmentLedger(Instance& instance, std::vector<int> median_ordinals, double p,
                     double cost_offset = kCostOffset);

    double cost_p() const { return offset_ + connection_sum_; }
    double connection_sum() const { return connection_sum_; }
    double penalty() const { return p_; }
    double offset() const { return offset_; }

    // Clients whose truncated distance equals p, i.e. d(j, S) >= p.
    // Zero when the penalty is the infinite sentinel.
    int outlier_count() const { return outliers_; }

    // offset + sum of distances of non-outlier clients.
    double inlier_cost() const;

    const Instance& instance() const { return *inst_; }
    const std::vector<int>& median_ordinals() const { return medians_; }
    bool is_median(int ordinal) const;
    std::size_t client_count() const { return assignments_.size(); }
    const Assignment& assignment(std::size_t client_index) const {
        return assignments_[client_index];
    }
    PointId facility_point(int ordinal) const { return inst_->facilities[ordinal]; }

    // Exact cost change if the swap were applied; the ledger is unchanged.
    // incoming must be disjoint from S, outgoing a subset of S, equal sizes.
    double swap_delta(std::span<const int> incoming, std::span<const int> outgoing) const;

    // S <- S + incoming - outgoing; caches and totals updated.
    void apply_swap(std::span<const int> incoming, std::span<const int> outgoing,
                    RecourseLog* recourse = nullptr, int t = 0);

    // Appends `point` to the instance's client list and assigns it to its
    // nearest median. Returns the cost increase.
    double insert_client(PointId point);

    // p <- new_p (monotone). Clients cached at the old truncation are
    // re-minimized over S.
    void raise_penalty(double new_p);

    // Grows S by one median without removing any (F = C warm-up).
    void add_median(int ordinal, RecourseLog* recourse = nullptr, int t = 0);

    // Field-for-field equality of the semantic state (medians, penalty,
    // assignments, totals); used by rebuild checks.
    bool operator==(const AssignmentLedger& other) const;

private:
    double dp(PointId a, PointId b) const { return inst_->space->truncated(a, b, p_); }
    bool is_outlier_distance(double d) const;
    Assignment compute_assignment(PointId client) const;
    static void merge_candidate(Assignment& a, double d, int ordinal);
    void resum();
    void validate_swap(std::span<const int> incoming, std::span<const int> outgoing) const;

    Instance* inst_;
    std::vector<int> medians_;       // sorted ascending
    std::vector<char> median_flag_;  // indexed by ordinal
    double p_;
    double offset_;
    double connection_sum_ = 0.0;
    int outliers_ = 0;
    std::vector<Assignment> assignments_;  // parallel to inst_->clients
    std::unordered_set<PointId> client_ids_;
};

// Converts the ledger's state into a Solution: medians as point ids plus the
// clients currently truncated at p.
Solution extract_solution(const AssignmentLedger& ledger);

}  // namespace okm
