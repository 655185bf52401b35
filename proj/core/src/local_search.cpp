#include "okm/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace okm {

namespace {

double efficiency_bound(std::size_t swap_size, double rho) {
    return -(static_cast<double>(swap_size) * rho);
}

// Lexicographically next size-s index combination out of [0, n). Returns
// false when the enumeration is exhausted.
bool next_combination(std::vector<int>& idx, int n) {
    const int s = static_cast<int>(idx.size());
    for (int i = s - 1; i >= 0; --i) {
        if (idx[i] < n - (s - i)) {
            ++idx[i];
            for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

struct ScanState {
    bool found = false;
    double best_delta = 0.0;
    SwapCandidate best;
};

// Considers one candidate in canonical order; returns true when the caller
// can stop (first improvement found).
bool consider(ScanState& st, const SearchParams& params, double delta, std::size_t size,
              const std::vector<int>& incoming, const std::vector<int>& outgoing) {
    if (!(delta < efficiency_bound(size, params.rho))) return false;
    if (params.strategy == SwapStrategy::kFirstImprovement) {
        st.found = true;
        st.best = SwapCandidate{incoming, outgoing};
        return true;
    }
    if (!st.found || delta < st.best_delta) {
        st.found = true;
        st.best_delta = delta;
        st.best = SwapCandidate{incoming, outgoing};
    }
    return false;
}

}  // namespace

bool is_efficient(const AssignmentLedger& ledger, const SwapCandidate& candidate, double rho) {
    const double delta = ledger.swap_delta(candidate.incoming, candidate.outgoing);
    return delta < efficiency_bound(candidate.outgoing.size(), rho);
}

std::optional<SwapCandidate> find_efficient_swap(const AssignmentLedger& ledger,
                                                 const SearchParams& params) {
    if (params.ell < 1) throw std::invalid_argument("find_efficient_swap: ell must be >= 1");
    const auto& medians = ledger.median_ordinals();
    const int nf = static_cast<int>(ledger.instance().facilities.size());
    std::vector<int> open;  // non-median ordinals, ascending
    open.reserve(nf - medians.size());
    for (int ord = 0; ord < nf; ++ord) {
        if (!ledger.is_median(ord)) open.push_back(ord);
    }
    const int ks = static_cast<int>(medians.size());
    const int no = static_cast<int>(open.size());
    if (ks == 0 || no == 0) return std::nullopt;

    ScanState st;

    // Size 1: one pass per incoming facility accumulates the shared gain and
    // the per-outgoing correction for all k pairs at once. The accumulation
    // order per pair matches swap_delta exactly.
    {
        const std::size_t n = ledger.client_count();
        const Instance& inst = ledger.instance();
        std::vector<int> median_slot(nf, -1);
        for (int mi = 0; mi < ks; ++mi) median_slot[medians[mi]] = mi;
        // deltas[mi * no + ci]
        std::vector<double> deltas(static_cast<std::size_t>(ks) * no);
        std::vector<double> corr(ks);
        for (int ci = 0; ci < no; ++ci) {
            const PointId in_point = inst.facilities[open[ci]];
            double base = 0.0;
            std::fill(corr.begin(), corr.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& a = ledger.assignment(i);
                const double c = inst.space->truncated(inst.clients[i], in_point, ledger.penalty());
                const double gain = c - a.nearest_d;
                if (gain < 0.0) base += gain;
                corr[median_slot[a.nearest]] += std::min(a.second_d, c) - std::min(a.nearest_d, c);
            }
            for (int mi = 0; mi < ks; ++mi) {
                deltas[static_cast<std::size_t>(mi) * no + ci] = base + corr[mi];
            }
        }
        for (int mi = 0; mi < ks; ++mi) {
            for (int ci = 0; ci < no; ++ci) {
                const double delta = deltas[static_cast<std::size_t>(mi) * no + ci];
                if (consider(st, params, delta, 1, {open[ci]}, {medians[mi]})) {
                    return st.best;
                }
            }
        }
    }

    // Sizes 2..ell: plain combination enumeration over the generic delta.
    const int max_size = std::min({params.ell, ks, no});
    std::vector<int> out_sel, in_sel;
    for (int s = 2; s <= max_size; ++s) {
        std::vector<int> oi(s), ii(s);
        for (int i = 0; i < s; ++i) oi[i] = i;
        do {
            out_sel.clear();
            for (int i : oi) out_sel.push_back(medians[i]);
            for (int i = 0; i < s; ++i) ii[i] = i;
            do {
                in_sel.clear();
                for (int i : ii) in_sel.push_back(open[i]);
                const double delta = ledger.swap_delta(in_sel, out_sel);
                if (consider(st, params, delta, s, in_sel, out_sel)) return st.best;
            } while (next_combination(ii, no));
        } while (next_combination(oi, ks));
    }

    if (st.found) return st.best;
    return std::nullopt;
}

int local_search_to_optimum(AssignmentLedger& ledger, const SearchParams& params,
                            const std::function<double(double)>& rho_rule,
                            RecourseLog* recourse, int t, int max_swaps) {
    int swaps = 0;
    while (swaps < max_swaps) {
        SearchParams step = params;
        step.rho = rho_rule(ledger.cost_p());
        auto cand = find_efficient_swap(ledger, step);
        if (!cand) break;
        ledger.apply_swap(cand->incoming, cand->outgoing, recourse, t);
        ++swaps;
    }
    return swaps;
}

Solution offline_penalty_local_search(Instance& instance, double p, const SearchParams& params) {
    if (instance.k < 1 || instance.k > static_cast<int>(instance.facilities.size())) {
        throw std::invalid_argument("offline_penalty_local_search: need 1 <= k <= |F|");
    }
    std::vector<int> init(instance.k);
    for (int i = 0; i < instance.k; ++i) init[i] = i;
    AssignmentLedger ledger(instance, std::move(init), p);
    local_search_to_optimum(ledger, params, [&params](double) { return params.rho; });
    return extract_solution(ledger);
}

Solution offline_bicriteria(Instance& instance, const BicriteriaOptions& options) {
    if (instance.z == 0) {
        throw std::domain_error(
            "offline_bicriteria: z = 0 has no outlier budget; run "
            "offline_penalty_local_search with an infinite penalty instead");
    }
    if (options.ell < 1 || !(options.gamma > 0.0) || !(options.grid_factor > 1.0)) {
        throw std::invalid_argument("offline_bicriteria: bad options");
    }
    std::vector<PointId> ids = instance.facilities;
    ids.insert(ids.end(), instance.clients.begin(), instance.clients.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const auto [min_pos, max_d] = instance.space->diameter_bounds(ids);

    const double ell = options.ell;
    const double outlier_budget = (1.0 + 1.0 / ell) * (1.0 + options.gamma) * instance.z;
    const double p_per_guess = (3.0 * ell + 2.0) / ((ell + 1.0) * options.gamma * instance.z);

    double lo = 0.1 * min_pos;
    double hi = static_cast<double>(instance.clients.size()) * max_d;
    if (!(lo > 0.0)) lo = hi > 0.0 ? hi : 1.0;  // degenerate: all points coincide
    if (hi < lo) hi = lo;

    SearchParams params;
    params.ell = options.ell;
    params.rho = 0.0;

    bool have_best = false;
    double best_cost = 0.0;
    Solution best;
    for (double guess = lo;; guess *= options.grid_factor) {
        const double p = p_per_guess * guess;
        Solution sol = offline_penalty_local_search(instance, p, params);
        if (static_cast<double>(sol.outliers.size()) <= outlier_budget) {
            // Connection cost over the clients this solution keeps.
            double sum = 0.0;
            for (PointId c : instance.clients) {
                if (std::binary_search(sol.outliers.begin(), sol.outliers.end(), c)) continue;
                double d = std::numeric_limits<double>::infinity();
                for (PointId m : sol.medians) d = std::min(d, instance.space->distance(c, m));
                sum += d;
            }
            const double cost = kCostOffset + sum;
            if (!have_best || cost < best_cost) {
                have_best = true;
                best_cost = cost;
                best = std::move(sol);
            }
        }
        if (guess >= hi) break;
    }
    if (!have_best) {
        throw std::logic_error("offline_bicriteria: no guess met the outlier budget");
    }
    return best;
}

}  // namespace okm
