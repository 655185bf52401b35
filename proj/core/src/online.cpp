#include "okm/online.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace okm {

namespace {

void validate_config(const OnlineConfig& c) {
    if (c.k < 1) throw std::invalid_argument("online: k must be >= 1");
    if (c.z < 0) throw std::invalid_argument("online: z must be >= 0");
    if (!(c.epsilon > 0.0) || !(c.epsilon < 1.0)) {
        throw std::invalid_argument("online: epsilon must lie in (0, 1)");
    }
    if (!(c.gamma > 0.0)) throw std::invalid_argument("online: gamma must be > 0");
    if (c.ell < 1 || c.ell > c.k) throw std::invalid_argument("online: need 1 <= ell <= k");
    if (c.z_mode == ZMode::kIncremental && !(c.epsilon_z > 0.0)) {
        throw std::invalid_argument("online: epsilon_z must be > 0 in incremental mode");
    }
    if (c.lazy_alpha < 0.0) throw std::invalid_argument("online: lazy_alpha must be >= 0");
}

std::vector<int> initial_medians(const OnlineConfig& c, const std::vector<PointId>& facilities) {
    if (c.setting == FacilityMode::kStaticF) {
        if (static_cast<int>(facilities.size()) < c.k) {
            throw std::invalid_argument("online: static F needs at least k facilities");
        }
        std::vector<int> m(c.k);
        for (int i = 0; i < c.k; ++i) m[i] = i;
        return m;
    }
    if (!facilities.empty()) {
        throw std::invalid_argument("online: F = C starts with no facility list");
    }
    return {};
}

}  // namespace

double outlier_threshold(const OnlineConfig& config, int z_prime) {
    return (1.0 / (1.0 - config.epsilon)) * (1.0 + 1.0 / static_cast<double>(config.ell)) *
           (1.0 + config.gamma) * static_cast<double>(z_prime);
}

double initial_penalty(const OnlineConfig& config) {
    if (config.z == 0) return std::numeric_limits<double>::infinity();
    return std::min(1.0 / (10.0 * config.gamma * static_cast<double>(config.z)), 0.1);
}

OnlineEngine::OnlineEngine(const OnlineConfig& config, const MetricSpace& space,
                           std::vector<PointId> facilities)
    : cfg_((validate_config(config), config)),
      inst_{&space, std::move(facilities), {}, config.k, config.z},
      ledger_(inst_, initial_medians(cfg_, inst_.facilities), initial_penalty(cfg_)),
      z_prime_(cfg_.z_mode == ZMode::kStatic ? cfg_.z : 0),
      last_search_cost_(ledger_.cost_p()) {}

void OnlineEngine::run_search_and_doubling(int& swaps) {
    const auto rho_rule = [this](double cost) {
        return cfg_.epsilon * cost / static_cast<double>(cfg_.k);
    };
    SearchParams params;
    params.ell = cfg_.ell;
    for (;;) {
        if (static_cast<int>(ledger_.median_ordinals().size()) == cfg_.k) {
            swaps += local_search_to_optimum(ledger_, params, rho_rule, &recourse_, t_);
        }
        if (static_cast<double>(ledger_.outlier_count()) > outlier_threshold(cfg_, z_prime_)) {
            ledger_.raise_penalty(2.0 * ledger_.penalty());
            ++stage_;
            continue;
        }
        last_search_cost_ = ledger_.cost_p();
        return;
    }
}

StepReport OnlineEngine::insert(PointId point) {
    ++t_;
    if (cfg_.setting == FacilityMode::kFEqualsC) {
        inst_.facilities.push_back(point);
        if (static_cast<int>(inst_.clients.size()) + 1 <= cfg_.k) {
            // Warm-up: every arrival is a median until S reaches size k.
            ledger_.add_median(static_cast<int>(inst_.facilities.size()) - 1, &recourse_, t_);
        }
    }

    StepReport report;
    report.t = t_;
    report.arrival_delta = ledger_.insert_client(point);

    const bool lazy_ok = cfg_.lazy_alpha > 0.0 &&
                         ledger_.cost_p() < (1.0 + cfg_.lazy_alpha) * last_search_cost_;
    if (lazy_ok && static_cast<double>(ledger_.outlier_count()) <=
                       outlier_threshold(cfg_, z_prime_)) {
        report.lazy_skipped = true;
    } else {
        run_search_and_doubling(report.swaps);
    }

    snapshots_.push_back(ledger_.median_ordinals());
    report.cost_p = ledger_.cost_p();
    report.p = ledger_.penalty();
    report.outliers = ledger_.outlier_count();
    report.recourse = recourse_.additions_at(t_);
    report.stage = stage_;
    return report;
}

void OnlineEngine::advance_z(int new_z) {
    if (cfg_.z_mode != ZMode::kIncremental) {
        throw std::domain_error("advance_z: engine is not in incremental z mode");
    }
    if (new_z < prev_z_) throw std::invalid_argument("advance_z: z can only grow");
    prev_z_ = new_z;
    if (new_z > z_prime_) {
        z_prime_ = static_cast<int>(std::floor((1.0 + cfg_.epsilon_z) * new_z));
        ++epochs_;
    }
}

Solution OnlineEngine::current_solution() const {
    if (t_ == 0) throw std::logic_error("current_solution: no arrival processed yet");
    return extract_solution(ledger_);
}

}  // namespace okm
