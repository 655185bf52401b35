// Command-line front end: replay experiments, brute-force small instances,
// and verify emitted step logs.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant violation.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "okm/experiment.hpp"
#include "okm/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

// "0-9", "0,1,2", or a mix ("0-3,7"); empty selects every column.
std::vector<int> parse_columns(const std::string& spec) {
    std::vector<int> cols;
    if (spec.empty()) return cols;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto dash = part.find('-');
        auto to_int = [&part](const std::string& s) {
            int v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
                throw CLI::ValidationError("--columns", "bad column spec: " + part);
            }
            return v;
        };
        if (dash == std::string::npos) {
            cols.push_back(to_int(part));
        } else {
            const int lo = to_int(part.substr(0, dash));
            const int hi = to_int(part.substr(dash + 1));
            if (hi < lo) throw CLI::ValidationError("--columns", "bad range: " + part);
            for (int c = lo; c <= hi; ++c) cols.push_back(c);
        }
    }
    return cols;
}

struct RunFlags {
    std::string input;
    std::string columns;
    std::string facilities;
    std::string setting = "f-eq-c";
    std::string z_mode = "static";
    std::string out;
    int max_rows = 10000;
    int k = 10;
    int z = 200;
    double epsilon = 0.05;
    double gamma = 1.0;
    int ell = 1;
    double alpha = 0.2;
    double epsilon_z = 0.1;
    int baseline_restarts = 0;
    int stride = 50;
    std::uint64_t seed = 0;
    double scale = 1.0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool require_out) {
    cmd->add_option("--input", f.input, "numeric CSV of arriving points")->required();
    cmd->add_option("--columns", f.columns, "zero-based columns, e.g. 0-9 or 0,2,5 (default: all)");
    cmd->add_option("--max-rows", f.max_rows, "replay at most this many rows")
        ->default_val(10000);
    cmd->add_option("--k", f.k, "number of medians")->default_val(10);
    cmd->add_option("--z", f.z, "outlier budget (final budget in incremental mode)")
        ->default_val(200);
    cmd->add_option("--epsilon", f.epsilon, "per-swap gain fraction, in (0,1)")->default_val(0.05);
    cmd->add_option("--gamma", f.gamma, "outlier/cost trade-off, > 0")->default_val(1.0);
    cmd->add_option("--ell", f.ell, "swap size")->default_val(1);
    cmd->add_option("--alpha", f.alpha, "lazy trigger slack; 0 disables")->default_val(0.2);
    cmd->add_option("--setting", f.setting, "static-f or f-eq-c")
        ->check(CLI::IsMember({"static-f", "f-eq-c"}))
        ->default_val("f-eq-c");
    cmd->add_option("--facilities", f.facilities, "facility CSV (static-f only)");
    cmd->add_option("--z-mode", f.z_mode, "static or incremental")
        ->check(CLI::IsMember({"static", "incremental"}))
        ->default_val("static");
    cmd->add_option("--epsilon-z", f.epsilon_z, "working-budget slack in incremental mode")
        ->default_val(0.1);
    cmd->add_option("--baseline-restarts", f.baseline_restarts,
                    "offline restarts per checkpoint; 0 disables the baseline")
        ->default_val(0);
    cmd->add_option("--stride", f.stride, "arrivals between baseline checkpoints")
        ->default_val(50);
    cmd->add_option("--seed", f.seed, "seed for baseline restarts")->default_val(0);
    cmd->add_option("--scale", f.scale, "multiplier applied to all distances")->default_val(1.0);
    auto* out = cmd->add_option("--out", f.out, "output CSV path");
    if (require_out) out->required();
}

okm::ExperimentSpec to_spec(const RunFlags& f) {
    okm::ExperimentSpec spec;
    spec.input_path = f.input;
    spec.columns = parse_columns(f.columns);
    spec.max_rows = f.max_rows;
    spec.facilities_path = f.facilities;
    spec.output_path = f.out;
    spec.baseline_restarts = f.baseline_restarts;
    spec.checkpoint_stride = f.stride;
    spec.seed = f.seed;
    spec.scale = f.scale;
    spec.config.k = f.k;
    spec.config.z = f.z;
    spec.config.epsilon = f.epsilon;
    spec.config.gamma = f.gamma;
    spec.config.ell = f.ell;
    spec.config.lazy_alpha = f.alpha;
    spec.config.setting =
        f.setting == "static-f" ? okm::FacilityMode::kStaticF : okm::FacilityMode::kFEqualsC;
    spec.config.z_mode = f.z_mode == "incremental" ? okm::ZMode::kIncremental : okm::ZMode::kStatic;
    spec.config.epsilon_z = f.epsilon_z;
    return spec;
}

int run_oracle(const std::string& input, const std::string& out_path) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open instance file: " + input);
    nlohmann::json j;
    in >> j;

    const auto& metric = j.at("metric");
    const std::string mode = metric.at("mode").get<std::string>();
    const double scale = metric.value("scale", 1.0);
    okm::MetricSpace space =
        mode == "euclidean"
            ? okm::MetricSpace::euclidean(
                  metric.at("coords").get<std::vector<std::vector<double>>>(), scale)
            : okm::MetricSpace::explicit_matrix(
                  metric.at("matrix").get<std::vector<std::vector<double>>>(), scale);

    okm::Instance inst;
    inst.space = &space;
    if (j.contains("facilities")) {
        inst.facilities = j["facilities"].get<std::vector<okm::PointId>>();
    } else {
        for (std::size_t i = 0; i < space.size(); ++i) {
            inst.facilities.push_back(static_cast<okm::PointId>(i));
        }
    }
    if (j.contains("clients")) {
        inst.clients = j["clients"].get<std::vector<okm::PointId>>();
    } else {
        inst.clients = inst.facilities;
    }
    inst.k = j.at("k").get<int>();
    inst.z = j.value("z", 0);

    const auto result = okm::brute_force_kmedo(inst);
    nlohmann::json out;
    out["cost"] = result.cost;
    out["medians"] = result.medians;
    out["outliers"] = result.outliers;
    if (j.contains("penalty")) {
        const auto popt = okm::brute_force_penalty_kmedian(inst, j["penalty"].get<double>());
        out["penalty_cost"] = popt.cost;
        out["penalty_medians"] = popt.medians;
    }

    if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + out_path);
        os << out.dump(2) << "\n";
    }
    return kExitOk;
}

struct ParsedLog {
    std::vector<okm::StepLogRow> rows;
    std::string raw;
};

ParsedLog parse_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open log file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ParsedLog log;
    log.raw = ss.str();

    std::stringstream lines(log.raw);
    std::string line;
    if (!std::getline(lines, line)) throw std::runtime_error(path + ": empty log");
    long row_no = 1;
    while (std::getline(lines, line)) {
        ++row_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string tok;
        std::stringstream fs(line);
        while (std::getline(fs, tok, ',')) fields.push_back(tok);
        while (fields.size() < 11) fields.emplace_back();
        auto num = [&](const std::string& s) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) {
                throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                         ": bad numeric field '" + s + "'");
            }
            return v;
        };
        okm::StepLogRow r;
        r.t = static_cast<int>(num(fields[0]));
        r.cost_p = num(fields[1]);
        r.p = num(fields[2]);
        r.outliers = static_cast<int>(num(fields[3]));
        r.recourse_step = static_cast<int>(num(fields[4]));
        r.recourse_total = static_cast<long>(num(fields[5]));
        r.swaps = static_cast<int>(num(fields[6]));
        r.stage = static_cast<int>(num(fields[7]));
        r.lazy_skipped = num(fields[8]) != 0.0;
        if (!fields[9].empty()) r.baseline_cost = num(fields[9]);
        if (!fields[10].empty()) r.ratio = num(fields[10]);
        log.rows.push_back(r);
    }
    return log;
}

int verify_log(const RunFlags& flags, const std::string& log_path, bool have_input) {
    const ParsedLog log = parse_log(log_path);
    const auto& rows = log.rows;
    if (rows.empty()) {
        std::cerr << "verify: log has no data rows\n";
        return kExitInvariant;
    }
    int violations = 0;
    auto fail = [&violations](int t, const std::string& what) {
        std::cerr << "verify: t=" << t << ": " << what << "\n";
        ++violations;
    };

    okm::OnlineConfig cfg = to_spec(flags).config;
    const int total = static_cast<int>(rows.size());
    long recourse_sum = 0;
    double prev_p = 0.0;
    int prev_stage = 0;
    int z_prime = cfg.z_mode == okm::ZMode::kStatic ? cfg.z : 0;
    double last_search_cost = okm::kCostOffset;
    for (int i = 0; i < total; ++i) {
        const auto& r = rows[i];
        if (r.t != i + 1) fail(r.t, "time steps must run 1..n");
        if (!(r.cost_p >= okm::kCostOffset)) fail(r.t, "cost_p below the additive offset");
        if (!(r.p > 0.0)) fail(r.t, "penalty must stay positive");
        recourse_sum += r.recourse_step;
        if (r.recourse_total != recourse_sum) fail(r.t, "recourse_total is not the prefix sum");
        if (i > 0) {
            if (r.p < prev_p) fail(r.t, "penalty decreased");
            if (r.stage < prev_stage) fail(r.t, "stage decreased");
            const int doublings = r.stage - prev_stage;
            if (std::isfinite(r.p) &&
                r.p != prev_p * std::exp2(static_cast<double>(doublings))) {
                fail(r.t, "penalty is not the doubling of its predecessor");
            }
        }
        if (cfg.z_mode == okm::ZMode::kIncremental) {
            const int z_now = static_cast<int>(std::floor(
                static_cast<double>(r.t) / static_cast<double>(total) * cfg.z));
            if (z_now > z_prime) {
                z_prime = static_cast<int>(std::floor((1.0 + cfg.epsilon_z) * z_now));
            }
        }
        if (static_cast<double>(r.outliers) > okm::outlier_threshold(cfg, z_prime)) {
            fail(r.t, "outlier count exceeds the doubling threshold");
        }
        if (r.lazy_skipped) {
            if (!(r.cost_p < (1.0 + cfg.lazy_alpha) * last_search_cost)) {
                fail(r.t, "lazy-skipped step drifted past the (1+alpha) window");
            }
        } else {
            last_search_cost = r.cost_p;
        }
        prev_p = r.p;
        prev_stage = r.stage;
    }

    if (have_input) {
        okm::ExperimentSpec spec = to_spec(flags);
        spec.output_path.clear();
        const auto replay = okm::run_experiment(spec);
        std::string replay_csv;
        {
            const std::string tmp = log_path + ".replay";
            okm::emit_log_csv(replay, tmp);
            std::ifstream in(tmp, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            replay_csv = ss.str();
            std::remove(tmp.c_str());
        }
        if (replay_csv != log.raw) {
            fail(0, "log does not match a deterministic replay of the input");
        }
    }

    if (violations > 0) {
        std::cerr << "verify: " << violations << " violation(s)\n";
        return kExitInvariant;
    }
    std::cout << "verify: ok (" << rows.size() << " rows)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online k-median with outliers: replay, oracle, verify"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "replay a point stream and emit the step log");
    add_run_flags(run_cmd, run_flags, /*require_out=*/true);

    std::string oracle_input, oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force a small instance (JSON)");
    oracle_cmd->add_option("--input", oracle_input, "instance JSON file")->required();
    oracle_cmd->add_option("--out", oracle_out, "output JSON path (default: stdout)");

    RunFlags verify_flags;
    std::string verify_log_path;
    auto* verify_cmd = app.add_subcommand("verify", "check invariants of an emitted log");
    verify_cmd->add_option("--log", verify_log_path, "step log CSV to verify")->required();
    add_run_flags(verify_cmd, verify_flags, /*require_out=*/false);
    verify_cmd->get_option("--input")->required(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            const auto rows = okm::run_experiment(to_spec(run_flags));
            std::cout << "wrote " << rows.size() << " rows to " << run_flags.out << "\n";
            return kExitOk;
        }
        if (oracle_cmd->parsed()) {
            return run_oracle(oracle_input, oracle_out);
        }
        if (verify_cmd->parsed()) {
            return verify_log(verify_flags, verify_log_path, !verify_flags.input.empty());
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
