#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "okm/online.hpp"

namespace okm {

// One replay: dataset, engine configuration, optional offline baseline
// estimation, and where the step log goes.
struct ExperimentSpec {
    std::string input_path;
    std::vector<int> columns;  // zero-based feature columns; empty selects all
    int max_rows = 10000;
    OnlineConfig config;
    int baseline_restarts = 0;  // 0 disables the baseline
    int checkpoint_stride = 50;
    std::string facilities_path;  // static-F only: candidate locations
    std::string output_path;      // empty: caller handles emission
    std::uint64_t seed = 0;       // baseline restarts and optional input shuffling
    double scale = 1.0;
    bool shuffle_input = false;
};

// One CSV row per arrival; the optional columns stay empty outside the
// baseline's interpolation range.
struct StepLogRow {
    int t = 0;
    double cost_p = 0.0;
    double p = 0.0;
    int outliers = 0;
    int recourse_step = 0;
    long recourse_total = 0;
    int swaps = 0;
    int stage = 0;
    bool lazy_skipped = false;
    std::optional<double> baseline_cost;
    std::optional<double> ratio;
};

// Reads at most max_rows points in file order. The first line is treated as a
// header when any selected field fails to parse; later rows with bad fields
// raise row/column-numbered errors.
std::vector<std::vector<double>> load_points_csv(const std::string& path,
                                                 const std::vector<int>& columns, int max_rows);

// Replays the dataset through the online engine and returns one row per
// arrival. Deterministic given the spec.
std::vector<StepLogRow> run_experiment(const ExperimentSpec& spec);

struct BaselineEstimate {
    double cost = 0.0;        // offset + connection cost over kept clients
    int outliers = 0;         // clients the estimate writes off
    bool within_budget = true;  // false when no candidate removed <= z outliers
};

// Offline estimate of the optimum over `prefix`: several restarted penalty
// local searches (facility order shuffled per restart) across a geometric
// penalty grid; cheapest candidate removing at most z outliers wins.
BaselineEstimate estimate_baseline(const MetricSpace& space, std::span<const PointId> prefix,
                                   int k, int z, int restarts, std::uint64_t seed);

// Writes the fixed-header CSV, reals at 17 significant digits, LF line ends.
void emit_log_csv(const std::vector<StepLogRow>& rows, const std::string& path);

}  // namespace okm
