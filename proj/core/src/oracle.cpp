#include "okm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "okm/ledger.hpp"

namespace okm {

namespace {

void check_enumeration_guard(std::size_t nf, int k) {
    if (k < 1 || k > static_cast<int>(nf)) {
        throw std::invalid_argument("oracle: need 1 <= k <= |F|");
    }
    double combos = 1.0;
    for (int i = 0; i < k; ++i) {
        combos *= static_cast<double>(nf - i) / static_cast<double>(i + 1);
        if (combos > 1e6) {
            throw std::length_error("oracle: C(|F|, k) exceeds the 10^6 enumeration guard");
        }
    }
}

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

}  // namespace

BruteForceResult brute_force_kmedo(const Instance& instance) {
    const std::size_t nf = instance.facilities.size();
    const std::size_t nc = instance.clients.size();
    check_enumeration_guard(nf, instance.k);
    if (instance.z < 0 || instance.z > static_cast<int>(nc)) {
        throw std::invalid_argument("brute_force_kmedo: need 0 <= z <= |C|");
    }

    std::vector<int> sel(instance.k);
    std::iota(sel.begin(), sel.end(), 0);
    std::vector<double> dist(nc);
    std::vector<int> order(nc);

    bool have_best = false;
    double best_sum = 0.0;
    std::vector<int> best_sel;
    std::vector<int> best_outliers;

    do {
        for (std::size_t j = 0; j < nc; ++j) {
            double d = std::numeric_limits<double>::infinity();
            for (int fi : sel) {
                d = std::min(d, instance.space->distance(instance.clients[j],
                                                         instance.facilities[fi]));
            }
            dist[j] = d;
        }
        std::iota(order.begin(), order.end(), 0);
        // Drop the z farthest clients; equal distances drop the larger ordinal.
        std::sort(order.begin(), order.end(), [&dist](int a, int b) {
            if (dist[a] != dist[b]) return dist[a] > dist[b];
            return a > b;
        });
        std::vector<char> dropped(nc, 0);
        for (int i = 0; i < instance.z; ++i) dropped[order[i]] = 1;
        double sum = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            if (!dropped[j]) sum += dist[j];
        }
        if (!have_best || sum < best_sum) {
            have_best = true;
            best_sum = sum;
            best_sel = sel;
            best_outliers.assign(order.begin(), order.begin() + instance.z);
        }
    } while (next_combination(sel, static_cast<int>(nf)));

    BruteForceResult r;
    r.cost = kCostOffset + best_sum;
    for (int fi : best_sel) r.medians.push_back(instance.facilities[fi]);
    std::sort(r.medians.begin(), r.medians.end());
    for (int j : best_outliers) r.outliers.push_back(instance.clients[j]);
    std::sort(r.outliers.begin(), r.outliers.end());
    return r;
}

PenaltyOptResult brute_force_penalty_kmedian(const Instance& instance, double p) {
    const std::size_t nf = instance.facilities.size();
    check_enumeration_guard(nf, instance.k);
    if (std::isnan(p) || p < 0.0) {
        throw std::invalid_argument("brute_force_penalty_kmedian: penalty must be >= 0");
    }

    std::vector<int> sel(instance.k);
    std::iota(sel.begin(), sel.end(), 0);
    bool have_best = false;
    double best_sum = 0.0;
    std::vector<int> best_sel;
    do {
        double sum = 0.0;
        for (PointId c : instance.clients) {
            double d = p;
            for (int fi : sel) {
                d = std::min(d, instance.space->truncated(c, instance.facilities[fi], p));
            }
            sum += d;
        }
        if (!have_best || sum < best_sum) {
            have_best = true;
            best_sum = sum;
            best_sel = sel;
        }
    } while (next_combination(sel, static_cast<int>(nf)));

    PenaltyOptResult r;
    r.cost = kCostOffset + best_sum;
    for (int fi : best_sel) r.medians.push_back(instance.facilities[fi]);
    std::sort(r.medians.begin(), r.medians.end());
    return r;
}

bool check_locality_bound(const Instance& instance, std::span<const PointId> medians,
                          double p, double rho, int ell) {
    const std::size_t nf = instance.facilities.size();
    check_enumeration_guard(nf, instance.k);
    if (ell < 1) throw std::invalid_argument("check_locality_bound: ell must be >= 1");

    double lhs_sum = 0.0;
    for (PointId c : instance.clients) {
        double d = p;
        for (PointId m : medians) d = std::min(d, instance.space->truncated(c, m, p));
        lhs_sum += d;
    }
    const double lhs = kCostOffset + lhs_sum;

    const double reroute = 3.0 + 2.0 / static_cast<double>(ell);
    const double give_up = (1.0 + 1.0 / static_cast<double>(ell)) * p;
    const double slack = static_cast<double>(instance.k) * rho;

    std::vector<int> sel(instance.k);
    std::iota(sel.begin(), sel.end(), 0);
    do {
        double rhs_sum = 0.0;
        for (PointId c : instance.clients) {
            double d = p;
            for (int fi : sel) {
                d = std::min(d, instance.space->truncated(c, instance.facilities[fi], p));
            }
            rhs_sum += std::min(reroute * d, give_up);
        }
        if (lhs > kCostOffset + rhs_sum + slack) return false;
    } while (next_combination(sel, static_cast<int>(nf)));
    return true;
}

bool check_penalty_bound(double p, double opt, int z, int ell, double gamma,
                         FacilityMode setting) {
    if (z < 1) throw std::domain_error("check_penalty_bound: requires z >= 1");
    if (ell < 1 || !(gamma > 0.0)) throw std::invalid_argument("check_penalty_bound: bad params");
    const double factor = setting == FacilityMode::kFEqualsC ? 2.0 : 1.0;
    const double bound = factor * 2.0 * (3.0 * ell + 2.0) * opt /
                         (gamma * (ell + 1.0) * static_cast<double>(z));
    return p <= bound;
}

}  // namespace okm
