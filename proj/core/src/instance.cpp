#include "okm/instance.hpp"

#include <algorithm>

namespace okm {

RecourseLog::Entry& RecourseLog::entry_for(int t) {
    if (entries_.empty() || entries_.back().t != t) {
        entries_.push_back(Entry{t, {}, {}});
    }
    return entries_.back();
}

namespace {

bool erase_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return false;
    v.erase(it);
    return true;
}

void insert_sorted(std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

}  // namespace

void RecourseLog::record_swap(int t, std::span<const int> incoming,
                              std::span<const int> outgoing) {
    Entry& e = entry_for(t);
    for (int x : incoming) {
        if (erase_sorted(e.removed, x)) continue;  // re-added within the step
        insert_sorted(e.added, x);
        ++total_;
    }
    for (int x : outgoing) {
        if (erase_sorted(e.added, x)) {
            --total_;  // added earlier in the same step, net zero
            continue;
        }
        insert_sorted(e.removed, x);
    }
}

void RecourseLog::record_addition(int t, int ordinal) {
    Entry& e = entry_for(t);
    if (!erase_sorted(e.removed, ordinal)) {
        insert_sorted(e.added, ordinal);
        ++total_;
    }
}

long RecourseLog::total_two_sided() const {
    long two = 0;
    for (const Entry& e : entries_) {
        two += static_cast<long>(e.added.size()) + static_cast<long>(e.removed.size());
    }
    return two;
}

int RecourseLog::additions_at(int t) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->t == t) return static_cast<int>(it->added.size());
        if (it->t < t) break;
    }
    return 0;
}

}  // namespace okm
