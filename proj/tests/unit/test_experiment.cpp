#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "okm/experiment.hpp"
#include "okm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace okm;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name) {
        path = std::filesystem::temp_directory_path() / name;
    }
    ~TempFile() { std::filesystem::remove(path); }
    void write(const std::string& content) const {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

std::string synth_csv(std::uint64_t seed, int rows, int dims, int clusters) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centers(clusters, std::vector<double>(dims));
    for (auto& c : centers) {
        for (double& x : c) x = static_cast<double>(rng() % 1000) / 10.0;
    }
    std::string out;
    char buf[64];
    for (int r = 0; r < rows; ++r) {
        const bool outlier = rng() % 20 == 0;
        const auto& c = centers[rng() % clusters];
        for (int d = 0; d < dims; ++d) {
            double x;
            if (outlier) {
                x = static_cast<double>(rng() % 4000) / 10.0;
            } else {
                x = c[d] + static_cast<double>(rng() % 60) / 10.0 - 3.0;
            }
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out += buf;
            out += (d + 1 == dims) ? '\n' : ',';
        }
    }
    return out;
}

}  // namespace

TEST_CASE("csv loading basics") {
    TempFile f("okm_load_basic.csv");
    f.write("0,0\n3,4\n6,8\n");
    auto pts = load_points_csv(f.path.string(), {}, 100);
    REQUIRE(pts.size() == 3);
    CHECK(pts[1] == std::vector<double>{3.0, 4.0});

    auto capped = load_points_csv(f.path.string(), {}, 2);
    CHECK(capped.size() == 2);

    auto col0 = load_points_csv(f.path.string(), {1}, 100);
    CHECK(col0[2] == std::vector<double>{8.0});
}

TEST_CASE("csv header auto-detection and parse errors") {
    TempFile f("okm_load_header.csv");
    f.write("x,y\r\n1,2\n3,4\n");
    auto pts = load_points_csv(f.path.string(), {}, 100);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] == std::vector<double>{1.0, 2.0});

    TempFile g("okm_load_bad.csv");
    g.write("1,2\n3,oops\n");
    CHECK_THROWS_WITH_AS(load_points_csv(g.path.string(), {}, 100),
                         doctest::Contains("row 2"), std::runtime_error);

    TempFile h("okm_load_short_row.csv");
    h.write("1,2\n3\n");
    CHECK_THROWS_AS(load_points_csv(h.path.string(), {1}, 100), std::runtime_error);

    CHECK_THROWS_AS(load_points_csv("/nonexistent/file.csv", {}, 10), std::runtime_error);
}

TEST_CASE("csv column selection mirrors wide datasets") {
    TempFile f("okm_load_wide.csv");
    f.write("1,2,3,4,5,6,7,8,9,10,11,cat\n"
            "9,8,7,6,5,4,3,2,1,0,42,dog\n");
    auto pts = load_points_csv(f.path.string(), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 100);
    REQUIRE(pts.size() == 2);  // row 1 is data: selected fields are all numeric
    CHECK(pts[0].size() == 10);
    CHECK(pts[1][9] == 0.0);
}

TEST_CASE("log emission round-trips and is byte-stable") {
    std::vector<StepLogRow> rows(2);
    rows[0] = {1, 0.30000000000000004, 0.0005, 3, 1, 1, 2, 0, false, std::nullopt, std::nullopt};
    rows[1] = {2, 1.7, 0.001, 4, 0, 1, 0, 1, true, 1.2345678901234567, 0.9999999999999999};

    TempFile f("okm_emit.csv");
    emit_log_csv(rows, f.path.string());
    const std::string text = f.read();
    CHECK(text.find("t,cost_p,p,outliers,recourse_step,recourse_total,swaps,stage,lazy_skipped,"
                     "baseline_cost,ratio\n") == 0);
    CHECK(text.find("\r") == std::string::npos);

    // parse back the second row and compare bitwise
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    std::getline(ss, line);
    std::getline(ss, line);
    std::vector<std::string> fields;
    std::string tok;
    std::stringstream ls(line);
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    REQUIRE(fields.size() == 11);
    auto parse = [](const std::string& s) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        REQUIRE(ec == std::errc());
        REQUIRE(p == s.data() + s.size());
        return v;
    };
    CHECK(parse(fields[1]) == 1.7);
    CHECK(parse(fields[9]) == 1.2345678901234567);
    CHECK(parse(fields[10]) == 0.9999999999999999);
    CHECK(fields[8] == "1");

    TempFile g("okm_emit2.csv");
    emit_log_csv(rows, g.path.string());
    CHECK(f.read() == g.read());

    CHECK_THROWS_AS(emit_log_csv({}, f.path.string()), std::invalid_argument);
}

TEST_CASE("experiment replay is deterministic end to end") {
    TempFile data("okm_exp_data.csv");
    data.write(synth_csv(7, 120, 3, 4));

    ExperimentSpec spec;
    spec.input_path = data.path.string();
    spec.max_rows = 120;
    spec.config.k = 4;
    spec.config.z = 6;
    spec.config.epsilon = 0.1;
    spec.config.lazy_alpha = 0.2;
    spec.config.setting = FacilityMode::kFEqualsC;
    spec.baseline_restarts = 2;
    spec.checkpoint_stride = 25;
    spec.seed = 5;

    TempFile out1("okm_exp_out1.csv");
    TempFile out2("okm_exp_out2.csv");
    spec.output_path = out1.path.string();
    auto rows1 = run_experiment(spec);
    spec.output_path = out2.path.string();
    auto rows2 = run_experiment(spec);
    CHECK(out1.read() == out2.read());
    REQUIRE(rows1.size() == 120);

    // recourse_total is the prefix sum of recourse_step
    long total = 0;
    for (const auto& r : rows1) {
        total += r.recourse_step;
        CHECK(r.recourse_total == total);
    }

    // baseline defined exactly between the first and last checkpoint
    CHECK_FALSE(rows1[23].baseline_cost.has_value());
    CHECK(rows1[24].baseline_cost.has_value());   // t = 25
    CHECK(rows1[99].baseline_cost.has_value());   // t = 100
    CHECK_FALSE(rows1[100].baseline_cost.has_value());
    for (int t = 25; t <= 100; ++t) {
        REQUIRE(rows1[t - 1].baseline_cost.has_value());
        CHECK(rows1[t - 1].ratio.has_value());
        CHECK(*rows1[t - 1].baseline_cost > 0.0);
    }
    // piecewise linearity: interior points lie between neighboring checkpoints
    for (int t = 26; t < 50; ++t) {
        const double b0 = *rows1[24].baseline_cost;
        const double b1 = *rows1[49].baseline_cost;
        const double b = *rows1[t - 1].baseline_cost;
        CHECK(b >= std::min(b0, b1));
        CHECK(b <= std::max(b0, b1));
    }
}

TEST_CASE("incremental z replay reaches the final budget") {
    TempFile data("okm_exp_inc.csv");
    data.write(synth_csv(11, 100, 2, 3));

    ExperimentSpec spec;
    spec.input_path = data.path.string();
    spec.max_rows = 100;
    spec.config.k = 3;
    spec.config.z = 10;
    spec.config.epsilon = 0.1;
    spec.config.z_mode = ZMode::kIncremental;
    spec.config.epsilon_z = 0.1;
    spec.config.setting = FacilityMode::kFEqualsC;
    auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 100);
    // by the end the working budget covers the full z
    CHECK(rows.back().outliers <= static_cast<int>(
              (1.0 / 0.9) * 2.0 * 2.0 * std::floor(1.1 * 10.0)));
}

TEST_CASE("baseline estimates dominate the brute-force optimum") {
    std::mt19937_64 rng(404);
    for (int it = 0; it < 8; ++it) {
        auto set = okm::testing::random_point_set(rng(), 9);
        std::vector<PointId> prefix;
        for (int i = 0; i < 9; ++i) prefix.push_back(static_cast<PointId>(i));
        const int k = 2, z = 1;
        auto est = estimate_baseline(*set.space, prefix, k, z, 3, 17);
        CHECK(est.within_budget);
        CHECK(est.outliers <= z);

        Instance inst;
        inst.space = set.space.get();
        inst.facilities = prefix;
        inst.clients = prefix;
        inst.k = k;
        inst.z = z;
        const auto opt = brute_force_kmedo(inst);
        CHECK(est.cost >= opt.cost);
    }
}

TEST_CASE("more restarts never hurt the baseline") {
    auto set = okm::testing::random_point_set(505, 12);
    std::vector<PointId> prefix;
    for (int i = 0; i < 12; ++i) prefix.push_back(static_cast<PointId>(i));
    const auto one = estimate_baseline(*set.space, prefix, 3, 1, 1, 9);
    const auto five = estimate_baseline(*set.space, prefix, 3, 1, 5, 9);
    CHECK(five.cost <= one.cost);
}

TEST_CASE("experiment rejects inputs smaller than k") {
    TempFile data("okm_exp_small.csv");
    data.write("1,1\n2,2\n");
    ExperimentSpec spec;
    spec.input_path = data.path.string();
    spec.config.k = 5;
    spec.config.epsilon = 0.1;
    spec.config.setting = FacilityMode::kFEqualsC;
    CHECK_THROWS_AS(run_experiment(spec), std::runtime_error);
}
