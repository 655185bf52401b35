#pragma once

#include <span>

#include "okm/instance.hpp"

namespace okm {

// Brute-force ground truth for desk-scale instances, plus runtime checkers for
// the locality and penalty inequalities the solvers are expected to satisfy.
// Every routine guards on C(|F|, k) <= 10^6 subsets.

struct BruteForceResult {
    double cost = 0.0;                // includes the 0.1 offset
    std::vector<PointId> medians;     // sorted
    std::vector<PointId> outliers;    // sorted
};

// Enumerates all size-k median sets; for each, discards the z clients with
// the largest distance (ties discard the larger client ordinal first) and
// keeps the cheapest. Requires z <= |C|.
BruteForceResult brute_force_kmedo(const Instance& instance);

struct PenaltyOptResult {
    double cost = 0.0;             // includes the 0.1 offset
    std::vector<PointId> medians;  // sorted
};

// Optimum of the plain k-median instance under the metric truncated at p.
PenaltyOptResult brute_force_penalty_kmedian(const Instance& instance, double p);

// True iff for every size-k median set S*:
//   cost_p(S) <= 0.1 + sum_j min{(3 + 2/ell) d_p(j, S*), (1 + 1/ell) p} + k rho.
// Local optima of the penalty local search must pass this for their rho.
bool check_locality_bound(const Instance& instance, std::span<const PointId> medians,
                          double p, double rho, int ell);

// True iff p <= 2 (3 ell + 2) opt / (gamma (ell + 1) z), with one extra
// factor of 2 in the F = C setting. Requires z >= 1.
bool check_penalty_bound(double p, double opt, int z, int ell, double gamma,
                         FacilityMode setting);

}  // namespace okm
