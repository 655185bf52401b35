#include "support/fixtures.hpp"

#include <cmath>
#include <cstdlib>

namespace okm::testing {

namespace {

std::vector<std::vector<double>> l1_matrix(const std::vector<std::vector<int>>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            long d = 0;
            for (std::size_t c = 0; c < pts[i].size(); ++c) {
                d += std::labs(static_cast<long>(pts[i][c]) - pts[j][c]);
            }
            m[i][j] = static_cast<double>(d);
            m[j][i] = static_cast<double>(d);
        }
    }
    return m;
}

std::vector<std::vector<int>> random_points(std::mt19937_64& rng, int count, int coord_range,
                                            int dimensions) {
    std::vector<std::vector<int>> pts(count, std::vector<int>(dimensions));
    for (auto& p : pts) {
        for (int& x : p) x = static_cast<int>(rng() % static_cast<std::uint64_t>(coord_range + 1));
    }
    return pts;
}

}  // namespace

TestInstance random_instance(std::uint64_t seed, const FixtureLimits& limits) {
    std::mt19937_64 rng(seed);
    auto draw = [&rng](int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    const int nf = draw(limits.min_facilities, limits.max_facilities);
    const int nc = draw(limits.min_clients, limits.max_clients);
    const int k = draw(1, std::min(limits.max_k, nf));
    const int z = draw(0, std::min(limits.max_z, nc));

    const auto pts = random_points(rng, nf + nc, limits.coord_range, limits.dimensions);
    TestInstance t;
    t.space = std::make_unique<MetricSpace>(MetricSpace::explicit_matrix(l1_matrix(pts)));
    t.instance.space = t.space.get();
    for (int i = 0; i < nf; ++i) t.instance.facilities.push_back(static_cast<PointId>(i));
    for (int i = 0; i < nc; ++i) t.instance.clients.push_back(static_cast<PointId>(nf + i));
    t.instance.k = k;
    t.instance.z = z;
    return t;
}

TestPointSet random_point_set(std::uint64_t seed, int count, int coord_range, int dimensions) {
    std::mt19937_64 rng(seed);
    const auto pts = random_points(rng, count, coord_range, dimensions);
    TestPointSet s;
    s.space = std::make_unique<MetricSpace>(MetricSpace::explicit_matrix(l1_matrix(pts)));
    s.count = count;
    return s;
}

}  // namespace okm::testing
