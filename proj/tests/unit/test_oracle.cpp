#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "okm/ledger.hpp"
#include "okm/local_search.hpp"
#include "okm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace okm;
using okm::testing::random_instance;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("brute force with outliers on a line") {
    std::vector<std::vector<double>> coords{{0.0}, {1.0}, {2.0}, {9.0}};
    auto space = MetricSpace::euclidean(coords);
    Instance inst{&space, {0}, {1, 2, 3}, 1, 1};
    auto r = brute_force_kmedo(inst);
    CHECK(r.cost == 3.1);  // drops the client at 9
    CHECK(r.medians == std::vector<PointId>{0});
    CHECK(r.outliers == std::vector<PointId>{3});

    inst.z = 3;  // everything discarded
    CHECK(brute_force_kmedo(inst).cost == 0.1);
}

TEST_CASE("outlier ties discard the larger client ordinal") {
    std::vector<std::vector<double>> coords{{0.0}, {4.0}, {4.0}, {4.0}};
    auto space = MetricSpace::euclidean(coords);
    Instance inst{&space, {0}, {1, 2, 3}, 1, 2};
    auto r = brute_force_kmedo(inst);
    CHECK(r.outliers == std::vector<PointId>{2, 3});  // client ordinals 1 and 2
    CHECK(r.cost == 4.1);
}

TEST_CASE("brute force lower-bounds any heuristic solution") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 60; ++it) {
        auto t = random_instance(rng(), {.max_facilities = 7, .max_clients = 9});
        Instance& inst = t.instance;
        const auto opt = brute_force_kmedo(inst);
        Solution sol = offline_penalty_local_search(inst, 30.0, SearchParams{1, 0.0});
        // evaluate the heuristic's medians the way the oracle does
        std::vector<double> dist;
        for (PointId c : inst.clients) {
            double d = kInf;
            for (PointId m : sol.medians) d = std::min(d, inst.space->distance(c, m));
            dist.push_back(d);
        }
        std::vector<int> order(dist.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&dist](int a, int b) {
            if (dist[a] != dist[b]) return dist[a] > dist[b];
            return a > b;
        });
        double sum = 0.0;
        for (std::size_t i = inst.z; i < order.size(); ++i) sum += dist[order[i]];
        CHECK(opt.cost <= kCostOffset + sum);
    }
}

TEST_CASE("penalty optimum: degenerate penalties") {
    std::vector<std::vector<double>> coords{{0.0}, {3.0}, {1.0}, {5.0}};
    auto space = MetricSpace::euclidean(coords);
    Instance inst{&space, {0, 1}, {2, 3}, 1, 0};

    auto big = brute_force_penalty_kmedian(inst, 1e9);
    auto plain = brute_force_kmedo(inst);  // z = 0
    CHECK(big.cost == plain.cost);
    CHECK(big.medians == plain.medians);

    CHECK(brute_force_penalty_kmedian(inst, 0.0).cost == 0.1);
}

TEST_CASE("penalty optimum is monotone in p and in the client set") {
    std::mt19937_64 rng(22);
    for (int it = 0; it < 50; ++it) {
        auto t = random_instance(rng(), {.min_clients = 3});
        Instance& inst = t.instance;
        const double p1 = static_cast<double>(rng() % 30);
        const double p2 = p1 + static_cast<double>(1 + rng() % 30);
        CHECK(brute_force_penalty_kmedian(inst, p1).cost <=
              brute_force_penalty_kmedian(inst, p2).cost);

        Instance fewer = inst;
        fewer.clients.pop_back();
        CHECK(brute_force_penalty_kmedian(fewer, p2).cost <=
              brute_force_penalty_kmedian(inst, p2).cost);
    }
}

TEST_CASE("oracle self-consistency: no outliers equals infinite penalty") {
    std::mt19937_64 rng(33);
    for (int it = 0; it < 40; ++it) {
        auto t = random_instance(rng());
        Instance& inst = t.instance;
        inst.z = 0;
        auto a = brute_force_kmedo(inst);
        auto b = brute_force_penalty_kmedian(inst, kInf);
        CHECK(a.cost == b.cost);
        CHECK(a.medians == b.medians);
    }
}

TEST_CASE("enumeration guard trips on large instances") {
    auto set = okm::testing::random_point_set(4, 50);
    Instance inst;
    inst.space = set.space.get();
    for (int i = 0; i < 50; ++i) inst.facilities.push_back(static_cast<PointId>(i));
    inst.clients.push_back(0);
    inst.k = 25;
    inst.z = 0;
    CHECK_THROWS_AS(brute_force_kmedo(inst), std::length_error);
    CHECK_THROWS_AS(brute_force_penalty_kmedian(inst, 1.0), std::length_error);
    CHECK_THROWS_AS(check_locality_bound(inst, {{0}}, 1.0, 0.0, 1), std::length_error);
}

TEST_CASE("locality bound: forced and violated cases") {
    // k = 1 with a single facility: S = S* is forced, bound trivially holds.
    std::vector<std::vector<double>> coords{{0.0}, {2.0}, {4.0}};
    auto space = MetricSpace::euclidean(coords);
    Instance inst{&space, {0}, {1, 2}, 1, 0};
    CHECK(check_locality_bound(inst, std::vector<PointId>{0}, 10.0, 0.0, 1));

    // An adversarially bad S violates the bound: the facility on the clients
    // beats the far one by more than the locality factor.
    std::vector<std::vector<double>> coords2{{1000.0}, {0.0}, {0.0}, {0.0}};
    auto space2 = MetricSpace::euclidean(coords2);
    Instance inst2{&space2, {0, 1}, {2, 3}, 1, 0};
    CHECK_FALSE(check_locality_bound(inst2, std::vector<PointId>{0}, 1e6, 0.0, 1));
}

TEST_CASE("penalty bound checker arithmetic") {
    // initial state shape: p = 0.0005, opt = 0.1, z = 200
    CHECK(check_penalty_bound(0.0005, 0.1, 200, 1, 1.0, FacilityMode::kStaticF));
    // bound for these parameters is exactly 2*5*0.1/(2*200) = 0.0025
    CHECK(check_penalty_bound(0.0025, 0.1, 200, 1, 1.0, FacilityMode::kStaticF));   // non-strict
    CHECK_FALSE(check_penalty_bound(0.0026, 0.1, 200, 1, 1.0, FacilityMode::kStaticF));
    // the F = C setting doubles the allowance
    CHECK(check_penalty_bound(0.005, 0.1, 200, 1, 1.0, FacilityMode::kFEqualsC));
    CHECK_THROWS_AS(check_penalty_bound(0.1, 1.0, 0, 1, 1.0, FacilityMode::kStaticF),
                    std::domain_error);
}
