#include "okm/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace okm {

AssignmentLedger::AssignmentLedger(Instance& instance, std::vector<int> median_ordinals,
                                   double p, double cost_offset)
    : inst_(&instance), medians_(std::move(median_ordinals)), p_(p), offset_(cost_offset) {
    if (inst_->space == nullptr) throw std::invalid_argument("ledger: instance has no metric space");
    if (std::isnan(p_) || p_ < 0.0) throw std::invalid_argument("ledger: penalty must be >= 0");
    std::sort(medians_.begin(), medians_.end());
    if (std::adjacent_find(medians_.begin(), medians_.end()) != medians_.end()) {
        throw std::invalid_argument("ledger: duplicate median ordinal");
    }
    const int nf = static_cast<int>(inst_->facilities.size());
    for (int ord : medians_) {
        if (ord < 0 || ord >= nf) {
            throw std::invalid_argument("ledger: median ordinal " + std::to_string(ord) +
                                        " outside facility list");
        }
    }
    median_flag_.assign(nf, 0);
    for (int ord : medians_) median_flag_[ord] = 1;

    assignments_.reserve(inst_->clients.size());
    for (PointId c : inst_->clients) {
        if (!client_ids_.insert(c).second) {
            throw std::invalid_argument("ledger: duplicate client id " + std::to_string(c));
        }
        assignments_.push_back(compute_assignment(c));
    }
    resum();
}

bool AssignmentLedger::is_median(int ordinal) const {
    return ordinal >= 0 && ordinal < static_cast<int>(median_flag_.size()) &&
           median_flag_[ordinal] != 0;
}

bool AssignmentLedger::is_outlier_distance(double d) const {
    return std::isfinite(p_) && d == p_;
}

void AssignmentLedger::merge_candidate(Assignment& a, double d, int ordinal) {
    if (a.nearest == -1) {
        a.nearest = ordinal;
        a.nearest_d = d;
        return;
    }
    if (d < a.nearest_d || (d == a.nearest_d && ordinal < a.nearest)) {
        a.second = a.nearest;
        a.second_d = a.nearest_d;
        a.nearest = ordinal;
        a.nearest_d = d;
    } else if (a.second == -1 || d < a.second_d || (d == a.second_d && ordinal < a.second)) {
        a.second = ordinal;
        a.second_d = d;
    }
}

AssignmentLedger::Assignment AssignmentLedger::compute_assignment(PointId client) const {
    Assignment a;
    a.nearest_d = p_;  // empty-set value: everything is penalty-far
    a.second_d = p_;
    for (int ord : medians_) {
        merge_candidate(a, dp(client, inst_->facilities[ord]), ord);
    }
    if (a.second == -1) a.second_d = p_;
    return a;
}

void AssignmentLedger::resum() {
    double sum = 0.0;
    int out = 0;
    for (const Assignment& a : assignments_) {
        sum += a.nearest_d;
        if (is_outlier_distance(a.nearest_d)) ++out;
    }
    connection_sum_ = sum;
    outliers_ = out;
}

double AssignmentLedger::inlier_cost() const {
    double sum = 0.0;
    for (const Assignment& a : assignments_) {
        if (!is_outlier_distance(a.nearest_d)) sum += a.nearest_d;
    }
    return offset_ + sum;
}

void AssignmentLedger::validate_swap(std::span<const int> incoming,
                                     std::span<const int> outgoing) const {
    if (incoming.empty() || incoming.size() != outgoing.size()) {
        throw std::invalid_argument("swap: incoming/outgoing must be non-empty and equal-sized");
    }
    const int nf = static_cast<int>(inst_->facilities.size());
    for (std::size_t i = 0; i < incoming.size(); ++i) {
        const int in = incoming[i];
        if (in < 0 || in >= nf || is_median(in)) {
            throw std::invalid_argument("swap: incoming ordinal " + std::to_string(in) +
                                        " is not an open facility slot");
        }
        if (!is_median(outgoing[i])) {
            throw std::invalid_argument("swap: outgoing ordinal " + std::to_string(outgoing[i]) +
                                        " is not a current median");
        }
        for (std::size_t j = i + 1; j < incoming.size(); ++j) {
            if (incoming[j] == in) throw std::invalid_argument("swap: repeated incoming ordinal");
            if (outgoing[j] == outgoing[i]) {
                throw std::invalid_argument("swap: repeated outgoing ordinal");
            }
        }
    }
}

double AssignmentLedger::swap_delta(std::span<const int> incoming,
                                    std::span<const int> outgoing) const {
    validate_swap(incoming, outgoing);
    if (incoming.size() == 1) {
        // Single-swap path. Shares its accumulation structure with the
        // column scan in find_efficient_swap so both produce identical bits.
        const int in_ord = incoming[0];
        const int out_ord = outgoing[0];
        const PointId in_point = inst_->facilities[in_ord];
        double base = 0.0;
        double corr = 0.0;
        for (std::size_t i = 0; i < assignments_.size(); ++i) {
            const Assignment& a = assignments_[i];
            const double c = dp(inst_->clients[i], in_point);
            const double gain = c - a.nearest_d;
            if (gain < 0.0) base += gain;
            if (a.nearest == out_ord) {
                corr += std::min(a.second_d, c) - std::min(a.nearest_d, c);
            }
        }
        return base + corr;
    }

    // Generic path: re-minimize affected clients over (S \ outgoing) + incoming.
    auto in_out = [&outgoing](int ord) {
        return std::find(outgoing.begin(), outgoing.end(), ord) != outgoing.end();
    };
    double delta = 0.0;
    for (std::size_t i = 0; i < assignments_.size(); ++i) {
        const Assignment& a = assignments_[i];
        const PointId cj = inst_->clients[i];
        double best;
        if (a.nearest == -1 || !in_out(a.nearest)) {
            best = a.nearest_d;
        } else if (a.second != -1 && !in_out(a.second)) {
            best = a.second_d;
        } else {
            best = p_;
            for (int ord : medians_) {
                if (!in_out(ord)) best = std::min(best, dp(cj, inst_->facilities[ord]));
            }
        }
        for (int ord : incoming) {
            best = std::min(best, dp(cj, inst_->facilities[ord]));
        }
        delta += best - a.nearest_d;
    }
    return delta;
}

void AssignmentLedger::apply_swap(std::span<const int> incoming, std::span<const int> outgoing,
                                  RecourseLog* recourse, int t) {
    validate_swap(incoming, outgoing);
    // the facility list may have grown since construction (F = C arrivals)
    if (median_flag_.size() < inst_->facilities.size()) {
        median_flag_.resize(inst_->facilities.size(), 0);
    }
    auto in_out = [&outgoing](int ord) {
        return std::find(outgoing.begin(), outgoing.end(), ord) != outgoing.end();
    };

    for (int ord : outgoing) {
        median_flag_[ord] = 0;
        medians_.erase(std::lower_bound(medians_.begin(), medians_.end(), ord));
    }
    std::vector<int> added(incoming.begin(), incoming.end());
    std::sort(added.begin(), added.end());
    for (int ord : added) {
        median_flag_[ord] = 1;
        medians_.insert(std::lower_bound(medians_.begin(), medians_.end(), ord), ord);
    }

    for (std::size_t i = 0; i < assignments_.size(); ++i) {
        Assignment& a = assignments_[i];
        if ((a.nearest != -1 && in_out(a.nearest)) || (a.second != -1 && in_out(a.second))) {
            a = compute_assignment(inst_->clients[i]);
        } else {
            for (int ord : added) {
                merge_candidate(a, dp(inst_->clients[i], inst_->facilities[ord]), ord);
            }
        }
    }
    resum();
    if (recourse != nullptr) recourse->record_swap(t, incoming, outgoing);
}

double AssignmentLedger::insert_client(PointId point) {
    if (!client_ids_.insert(point).second) {
        throw std::invalid_argument("insert_client: duplicate point id " + std::to_string(point));
    }
    inst_->clients.push_back(point);
    Assignment a = compute_assignment(point);
    assignments_.push_back(a);
    connection_sum_ += a.nearest_d;  // append extends the canonical sum exactly
    if (is_outlier_distance(a.nearest_d)) ++outliers_;
    return a.nearest_d;
}

void AssignmentLedger::raise_penalty(double new_p) {
    if (std::isnan(new_p) || new_p < p_) {
        throw std::invalid_argument("raise_penalty: penalty can only increase");
    }
    const double old_p = p_;
    p_ = new_p;
    for (std::size_t i = 0; i < assignments_.size(); ++i) {
        Assignment& a = assignments_[i];
        if (a.nearest_d == old_p || a.second_d == old_p) {
            a = compute_assignment(inst_->clients[i]);
        }
    }
    resum();
}

void AssignmentLedger::add_median(int ordinal, RecourseLog* recourse, int t) {
    const int nf = static_cast<int>(inst_->facilities.size());
    if (ordinal < 0 || ordinal >= nf) {
        throw std::invalid_argument("add_median: ordinal outside facility list");
    }
    if (static_cast<int>(median_flag_.size()) < nf) median_flag_.resize(nf, 0);
    if (median_flag_[ordinal]) throw std::invalid_argument("add_median: already a median");
    median_flag_[ordinal] = 1;
    medians_.insert(std::lower_bound(medians_.begin(), medians_.end(), ordinal), ordinal);
    const PointId fp = inst_->facilities[ordinal];
    for (std::size_t i = 0; i < assignments_.size(); ++i) {
        merge_candidate(assignments_[i], dp(inst_->clients[i], fp), ordinal);
    }
    resum();
    if (recourse != nullptr) recourse->record_addition(t, ordinal);
}

bool AssignmentLedger::operator==(const AssignmentLedger& other) const {
    return medians_ == other.medians_ && p_ == other.p_ && offset_ == other.offset_ &&
           connection_sum_ == other.connection_sum_ && outliers_ == other.outliers_ &&
           assignments_ == other.assignments_;
}

Solution extract_solution(const AssignmentLedger& ledger) {
    Solution s;
    const Instance& inst = ledger.instance();
    s.medians.reserve(ledger.median_ordinals().size());
    for (int ord : ledger.median_ordinals()) s.medians.push_back(inst.facilities[ord]);
    std::sort(s.medians.begin(), s.medians.end());
    for (std::size_t i = 0; i < ledger.client_count(); ++i) {
        const auto& a = ledger.assignment(i);
        if (std::isfinite(ledger.penalty()) && a.nearest_d == ledger.penalty()) {
            s.outliers.push_back(inst.clients[i]);
        }
    }
    std::sort(s.outliers.begin(), s.outliers.end());
    return s;
}

}  // namespace okm
