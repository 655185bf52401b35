#include "okm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>

namespace okm {

namespace {

constexpr std::size_t kBaselineSnapshotLimit = 4000;  // full distance matrix above this is too big

bool parse_field(std::string_view field, double& out) {
    std::size_t b = 0;
    std::size_t e = field.size();
    while (b < e && (field[b] == ' ' || field[b] == '\t')) ++b;
    while (e > b && (field[e - 1] == ' ' || field[e - 1] == '\t')) --e;
    if (b == e) return false;
    const char* first = field.data() + b;
    const char* last = field.data() + e;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

void split_csv_line(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
}

// Deterministic Fisher-Yates; mt19937_64 is fully specified, std::shuffle is not.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::vector<std::vector<double>> load_points_csv(const std::string& path,
                                                 const std::vector<int>& columns, int max_rows) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    if (max_rows < 0) throw std::invalid_argument("load_points_csv: max_rows must be >= 0");
    for (int c : columns) {
        if (c < 0) throw std::invalid_argument("load_points_csv: negative column index");
    }

    std::vector<std::vector<double>> points;
    std::vector<std::string_view> fields;
    std::string line;
    long physical_row = 0;
    bool first_content_row = true;
    while (static_cast<int>(points.size()) < max_rows && std::getline(in, line)) {
        ++physical_row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        split_csv_line(line, fields);

        std::vector<int> selected;
        if (columns.empty()) {
            selected.resize(fields.size());
            for (std::size_t i = 0; i < fields.size(); ++i) selected[i] = static_cast<int>(i);
        } else {
            selected = columns;
        }

        std::vector<double> row;
        row.reserve(selected.size());
        bool ok = true;
        int bad_col = -1;
        for (int c : selected) {
            double v = 0.0;
            if (c >= static_cast<int>(fields.size()) || !parse_field(fields[c], v)) {
                ok = false;
                bad_col = c;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (first_content_row) {
                first_content_row = false;  // header row
                continue;
            }
            throw std::runtime_error(path + ": row " + std::to_string(physical_row) +
                                     ", column " + std::to_string(bad_col) +
                                     ": field is not numeric");
        }
        if (!points.empty() && row.size() != points.front().size()) {
            throw std::runtime_error(path + ": row " + std::to_string(physical_row) +
                                     ": inconsistent column count");
        }
        first_content_row = false;
        points.push_back(std::move(row));
    }
    return points;
}

BaselineEstimate estimate_baseline(const MetricSpace& space, std::span<const PointId> prefix,
                                   int k, int z, int restarts, std::uint64_t seed) {
    const std::size_t m = prefix.size();
    if (static_cast<int>(m) < k || k < 1) {
        throw std::invalid_argument("estimate_baseline: prefix must hold at least k points");
    }
    if (restarts < 1) throw std::invalid_argument("estimate_baseline: restarts must be >= 1");
    if (z < 0) throw std::invalid_argument("estimate_baseline: z must be >= 0");

    // Work on a distance-matrix snapshot when affordable: the grid of local
    // searches re-reads every pairwise distance many times over.
    std::optional<MetricSpace> snapshot;
    const MetricSpace* work_space = &space;
    std::vector<PointId> work_ids(prefix.begin(), prefix.end());
    if (m <= kBaselineSnapshotLimit) {
        std::vector<std::vector<double>> matrix(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const double d = space.distance(prefix[i], prefix[j]);
                matrix[i][j] = d;
                matrix[j][i] = d;
            }
        }
        snapshot.emplace(MetricSpace::explicit_matrix(std::move(matrix), 1.0));
        work_space = &*snapshot;
        for (std::size_t i = 0; i < m; ++i) work_ids[i] = static_cast<PointId>(i);
    }

    // Penalty grid matching the optimum-guess grid of the bicriteria solver
    // (ell = gamma = 1, so p = 5 g / (2 z)), ascending so each restart can
    // warm-start across grid points by raising the penalty in place.
    std::vector<double> penalties;
    if (z == 0) {
        penalties.push_back(std::numeric_limits<double>::infinity());
    } else {
        auto [min_pos, max_d] = work_space->diameter_bounds(work_ids);
        double lo = 0.1 * min_pos;
        double hi = static_cast<double>(m) * max_d;
        if (!(lo > 0.0)) lo = hi > 0.0 ? hi : 1.0;
        if (hi < lo) hi = lo;
        for (double g = lo;; g *= 2.0) {
            penalties.push_back(5.0 * g / (2.0 * static_cast<double>(z)));
            if (g >= hi) break;
        }
    }

    const auto rho_rule = [k](double cost) { return 0.05 * cost / static_cast<double>(k); };
    SearchParams params;
    params.ell = 1;

    bool have_best = false;
    BaselineEstimate best;
    bool have_fallback = false;
    BaselineEstimate fallback;
    for (int r = 0; r < restarts; ++r) {
        std::vector<PointId> fac = work_ids;
        deterministic_shuffle(fac, seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1);
        Instance inst{work_space, std::move(fac), work_ids, k, z};
        std::vector<int> init(k);
        for (int i = 0; i < k; ++i) init[i] = i;
        AssignmentLedger ledger(inst, std::move(init), penalties.front());
        for (std::size_t gi = 0; gi < penalties.size(); ++gi) {
            if (gi > 0) ledger.raise_penalty(penalties[gi]);
            local_search_to_optimum(ledger, params, rho_rule);
            const BaselineEstimate cand{ledger.inlier_cost(), ledger.outlier_count(), true};
            if (cand.outliers <= z) {
                if (!have_best || cand.cost < best.cost) {
                    have_best = true;
                    best = cand;
                }
            } else if (!have_fallback || cand.outliers < fallback.outliers ||
                       (cand.outliers == fallback.outliers && cand.cost < fallback.cost)) {
                have_fallback = true;
                fallback = cand;
            }
        }
    }
    if (have_best) return best;
    fallback.within_budget = false;
    return fallback;
}

std::vector<StepLogRow> run_experiment(const ExperimentSpec& spec) {
    const OnlineConfig& cfg = spec.config;
    auto client_rows = load_points_csv(spec.input_path, spec.columns, spec.max_rows);
    const int total = static_cast<int>(client_rows.size());
    if (total < cfg.k) {
        throw std::runtime_error(spec.input_path + ": fewer rows (" + std::to_string(total) +
                                 ") than k (" + std::to_string(cfg.k) + ")");
    }

    std::vector<std::vector<double>> all_rows;
    std::vector<PointId> facility_ids;
    if (cfg.setting == FacilityMode::kStaticF) {
        if (spec.facilities_path.empty()) {
            throw std::runtime_error("static F replay needs a facilities file");
        }
        all_rows = load_points_csv(spec.facilities_path, spec.columns,
                                   std::numeric_limits<int>::max());
        if (static_cast<int>(all_rows.size()) < cfg.k) {
            throw std::runtime_error(spec.facilities_path + ": fewer facilities than k");
        }
        facility_ids.resize(all_rows.size());
        for (std::size_t i = 0; i < all_rows.size(); ++i) facility_ids[i] = static_cast<PointId>(i);
    }
    const PointId first_client = static_cast<PointId>(all_rows.size());
    for (auto& r : client_rows) all_rows.push_back(std::move(r));
    const MetricSpace space = MetricSpace::euclidean(std::move(all_rows), spec.scale);

    std::vector<PointId> arrivals(total);
    for (int i = 0; i < total; ++i) arrivals[i] = first_client + static_cast<PointId>(i);
    if (spec.shuffle_input) deterministic_shuffle(arrivals, spec.seed);

    OnlineEngine engine(cfg, space, facility_ids);

    std::vector<StepLogRow> rows;
    rows.reserve(total);
    std::vector<double> inlier_costs(total, 0.0);
    std::vector<std::pair<int, double>> checkpoints;
    long recourse_total = 0;
    for (int t = 1; t <= total; ++t) {
        int z_now = cfg.z;
        if (cfg.z_mode == ZMode::kIncremental) {
            z_now = static_cast<int>(std::floor(static_cast<double>(t) /
                                                static_cast<double>(total) * cfg.z));
            engine.advance_z(z_now);
        }
        const StepReport rep = engine.insert(arrivals[t - 1]);
        recourse_total += rep.recourse;
        StepLogRow row;
        row.t = rep.t;
        row.cost_p = rep.cost_p;
        row.p = rep.p;
        row.outliers = rep.outliers;
        row.recourse_step = rep.recourse;
        row.recourse_total = recourse_total;
        row.swaps = rep.swaps;
        row.stage = rep.stage;
        row.lazy_skipped = rep.lazy_skipped;
        rows.push_back(row);
        inlier_costs[t - 1] = engine.inlier_cost();

        if (spec.baseline_restarts > 0 && spec.checkpoint_stride > 0 &&
            t % spec.checkpoint_stride == 0 && t >= cfg.k) {
            const auto est = estimate_baseline(space, std::span(arrivals.data(), t), cfg.k,
                                               z_now, spec.baseline_restarts, spec.seed);
            checkpoints.emplace_back(t, est.cost);
        }
    }

    if (!checkpoints.empty()) {
        std::size_t seg = 0;
        for (int t = checkpoints.front().first; t <= checkpoints.back().first; ++t) {
            while (seg + 1 < checkpoints.size() && checkpoints[seg + 1].first <= t) ++seg;
            double b;
            if (t == checkpoints[seg].first) {
                b = checkpoints[seg].second;  // exact at the checkpoint itself
            } else {
                const auto [t0, b0] = checkpoints[seg];
                const auto [t1, b1] = checkpoints[seg + 1];
                b = b0 + (b1 - b0) * (static_cast<double>(t - t0) / static_cast<double>(t1 - t0));
            }
            rows[t - 1].baseline_cost = b;
            rows[t - 1].ratio = inlier_costs[t - 1] / b;
        }
    }

    if (!spec.output_path.empty()) emit_log_csv(rows, spec.output_path);
    return rows;
}

void emit_log_csv(const std::vector<StepLogRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_log_csv: no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "t,cost_p,p,outliers,recourse_step,recourse_total,swaps,stage,lazy_skipped,"
           "baseline_cost,ratio\n";
    for (const StepLogRow& r : rows) {
        out << r.t << ',' << format_real(r.cost_p) << ',' << format_real(r.p) << ','
            << r.outliers << ',' << r.recourse_step << ',' << r.recourse_total << ','
            << r.swaps << ',' << r.stage << ',' << (r.lazy_skipped ? 1 : 0) << ',';
        if (r.baseline_cost) out << format_real(*r.baseline_cost);
        out << ',';
        if (r.ratio) out << format_real(*r.ratio);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace okm
