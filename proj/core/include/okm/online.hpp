#pragma once

#include <vector>

#include "okm/ledger.hpp"
#include "okm/local_search.hpp"

namespace okm {

enum class ZMode { kStatic, kIncremental };

struct OnlineConfig {
    int k = 1;
    int z = 0;              // outlier budget; the final/reference budget in incremental mode
    double epsilon = 0.05;  // in (0, 1); drives the per-swap gain requirement
    double gamma = 1.0;     // > 0; trades outlier count against cost
    int ell = 1;            // swap size, <= k
    FacilityMode setting = FacilityMode::kFEqualsC;
    ZMode z_mode = ZMode::kStatic;
    double epsilon_z = 0.1;   // slack of the working budget in incremental mode
    double lazy_alpha = 0.0;  // skip search while cost < (1+alpha) * last search cost; 0 disables
};

// Doubling condition threshold: the engine keeps the outlier count at or
// below (1/(1-epsilon)) (1 + 1/ell) (1 + gamma) z'.
double outlier_threshold(const OnlineConfig& config, int z_prime);

// min(1/(10 gamma z), 0.1) for z >= 1; the infinite sentinel when z = 0
// (no outliers allowed, truncation and doubling disabled).
double initial_penalty(const OnlineConfig& config);

// Per-arrival record of what the engine did.
struct StepReport {
    int t = 0;
    double arrival_delta = 0.0;  // cost increase caused by the arrival itself
    double cost_p = 0.0;         // after the step completed
    double p = 0.0;
    int outliers = 0;
    int swaps = 0;     // swap operations applied this step
    int recourse = 0;  // medians added this step, net
    int stage = 0;     // penalty doublings so far
    bool lazy_skipped = false;
};

// The online state machine: accepts one arrival at a time, runs the
// efficient-swap loop with rho = epsilon * cost_p / k, doubles the penalty
// while too many clients sit at the truncation radius, and logs recourse.
//
// Single-owner; one arrival is processed at a time.
class OnlineEngine {
public:
    // static F: `facilities` lists the candidate locations (|F| >= k).
    // F = C: leave `facilities` empty; every arrival becomes a candidate.
    OnlineEngine(const OnlineConfig& config, const MetricSpace& space,
                 std::vector<PointId> facilities = {});

    // the ledger refers into inst_, so the engine must stay put
    OnlineEngine(const OnlineEngine&) = delete;
    OnlineEngine& operator=(const OnlineEngine&) = delete;

    StepReport insert(PointId point);

    // Incremental mode only: raises the true outlier count to new_z; when it
    // passes the working budget z', starts a new epoch with
    // z' = floor((1 + epsilon_z) new_z). The penalty persists across epochs.
    void advance_z(int new_z);

    Solution current_solution() const;

    const OnlineConfig& config() const { return cfg_; }
    const AssignmentLedger& ledger() const { return ledger_; }
    const RecourseLog& recourse() const { return recourse_; }
    int time() const { return t_; }
    int stage() const { return stage_; }
    int z_prime() const { return z_prime_; }
    int epochs() const { return epochs_; }
    double last_search_cost() const { return last_search_cost_; }
    double inlier_cost() const { return ledger_.inlier_cost(); }

    // Median ordinals after each completed step, for audit.
    const std::vector<std::vector<int>>& median_snapshots() const { return snapshots_; }

private:
    void run_search_and_doubling(int& swaps);

    OnlineConfig cfg_;
    Instance inst_;
    AssignmentLedger ledger_;
    RecourseLog recourse_;
    int t_ = 0;
    int stage_ = 0;
    int z_prime_ = 0;
    int epochs_ = 0;
    int prev_z_ = 0;
    double last_search_cost_ = 0.0;
    std::vector<std::vector<int>> snapshots_;
};

}  // namespace okm
