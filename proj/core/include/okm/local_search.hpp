#pragma once

#include <functional>
#include <optional>

#include "okm/ledger.hpp"

namespace okm {

// An l-swap: open `incoming`, close `outgoing`. Equal sizes, incoming taken
// from outside S, outgoing from S. Both sorted ascending by facility ordinal.
struct SwapCandidate {
    std::vector<int> incoming;
    std::vector<int> outgoing;
};

enum class SwapStrategy { kFirstImprovement, kBestImprovement };

struct SearchParams {
    int ell = 1;         // maximum swap size
    double rho = 0.0;    // minimum per-median gain a swap must beat
    SwapStrategy strategy = SwapStrategy::kFirstImprovement;
};

// A swap qualifies when it decreases cost_p by strictly more than |A| * rho.
bool is_efficient(const AssignmentLedger& ledger, const SwapCandidate& candidate, double rho);

// Scans swaps of size 1..ell in canonical order (sizes ascending; outgoing
// sets lexicographic by facility ordinal, then incoming sets lexicographic).
// First-improvement returns the first qualifying swap, best-improvement the
// qualifying swap with minimum delta (ties to canonical order). An empty
// result certifies that no qualifying swap exists.
std::optional<SwapCandidate> find_efficient_swap(const AssignmentLedger& ledger,
                                                 const SearchParams& params);

// Repeatedly applies qualifying swaps until none exists, re-deriving rho from
// the current cost before every search. Returns the number of swap operations
// applied. `max_swaps` is a safety valve against rho = 0 stalls.
int local_search_to_optimum(AssignmentLedger& ledger, const SearchParams& params,
                            const std::function<double(double)>& rho_rule,
                            RecourseLog* recourse = nullptr, int t = 0,
                            int max_swaps = 1'000'000);

// Local search for the k-median instance under the metric truncated at p:
// starts from the first k facilities, descends with the constant rho from
// `params`, and declares clients at distance >= p outliers.
Solution offline_penalty_local_search(Instance& instance, double p, const SearchParams& params);

struct BicriteriaOptions {
    int ell = 1;
    double gamma = 1.0;
    double grid_factor = 2.0;  // geometric step between optimum guesses
};

// Guesses the optimum over a geometric grid, runs the penalty local search at
// the matching p for every guess, and returns the cheapest solution whose
// outlier count stays within (1 + 1/ell)(1 + gamma) z. Requires z >= 1.
Solution offline_bicriteria(Instance& instance, const BicriteriaOptions& options);

}  // namespace okm
