#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "okm/instance.hpp"

// Deterministic test fixtures. Instances use integer metrics (L1 over random
// integer grid points, served through explicit matrices) so every cost and
// delta in a test is an exactly representable integer and comparisons against
// from-scratch oracles need no tolerance.

namespace okm::testing {

struct TestInstance {
    std::unique_ptr<MetricSpace> space;  // stable address for instance.space
    Instance instance;
};

struct FixtureLimits {
    int min_facilities = 2;
    int max_facilities = 8;
    int min_clients = 1;
    int max_clients = 12;
    int max_k = 3;
    int max_z = 2;
    int coord_range = 60;  // coordinates drawn from [0, coord_range]
    int dimensions = 2;
};

// Static-F style instance: facility points first, then client points.
TestInstance random_instance(std::uint64_t seed, const FixtureLimits& limits = {});

// A bag of random integer grid points plus the explicit L1 metric over them,
// for F = C replays: every point is both a client and a candidate median.
struct TestPointSet {
    std::unique_ptr<MetricSpace> space;
    int count = 0;
};

TestPointSet random_point_set(std::uint64_t seed, int count, int coord_range = 60,
                              int dimensions = 2);

}  // namespace okm::testing
