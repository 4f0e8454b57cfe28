#include "batchq/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace batchq {

Schedule cycle_schedule(const CyclicPolicy& policy) {
    if (policy.k < 1) throw std::domain_error("cyclic policy requires k >= 1");
    Schedule s;
    s.actions.assign(static_cast<size_t>(policy.k) + 1, Action::ServeQ2);
    s.actions[0] = Action::ServeQ1;
    return s;
}

bool is_valid_schedule(const Schedule& schedule) {
    if (schedule.actions.size() < 2) return false;
    bool has1 = false, has2 = false;
    for (Action a : schedule.actions) (a == Action::ServeQ1 ? has1 : has2) = true;
    return has1 && has2;
}

double schedule_cycle_cost(const ModelParams& params, const Schedule& schedule) {
    if (!is_valid_schedule(schedule)) {
        throw std::invalid_argument(
            "schedule must have length >= 2 and serve both queues; a schedule "
            "serving one queue has unbounded cost");
    }
    const auto& a = schedule.actions;
    const int L = static_cast<int>(a.size());
    const double rates[2] = {params.lambda1, params.lambda2};
    double total = 0.0;
    double gp = 1.0;
    for (int t = 0; t < L; ++t) {
        const Action other = a[t] == Action::ServeQ1 ? Action::ServeQ2 : Action::ServeQ1;
        int age = 0;
        for (int back = 1; back < L; ++back) {
            if (a[static_cast<size_t>(((t - back) % L + L) % L)] == other) {
                age = back;
                break;
            }
        }
        total += gp * (params.lambda_bar + rates[static_cast<int>(other)] * age);
        gp *= params.gamma;
    }
    return total;
}

double schedule_total_cost(const ModelParams& params, const Schedule& schedule) {
    const double cycle = schedule_cycle_cost(params, schedule);
    double gp = 1.0;
    for (size_t i = 0; i < schedule.actions.size(); ++i) gp *= params.gamma;
    return cycle / (1.0 - gp);
}

namespace {

// bit i of a word is the action at position i; 0 = Q1, 1 = Q2
std::uint32_t rotate_word(std::uint32_t w, int p, int L) {
    const std::uint32_t mask = (L == 32) ? ~0u : ((1u << L) - 1u);
    return ((w >> p) | (w << (L - p))) & mask;
}

std::vector<Action> word_to_actions(std::uint32_t w, int L) {
    std::vector<Action> a(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) {
        a[static_cast<size_t>(i)] = (w >> i) & 1u ? Action::ServeQ2 : Action::ServeQ1;
    }
    return a;
}

// Near-equal costs (period-doubled copies of the same policy) resolve to the
// lexicographically smallest sequence, which also prefers the shorter one.
bool better_candidate(double c_new, const std::vector<Action>& s_new, double c_old,
                      const std::vector<Action>& s_old) {
    const double tol = 1e-9 * std::max(1.0, std::min(std::abs(c_new), std::abs(c_old)));
    if (c_new < c_old - tol) return true;
    if (c_new > c_old + tol) return false;
    return std::lexicographical_compare(s_new.begin(), s_new.end(), s_old.begin(),
                                        s_old.end());
}

}  // namespace

BestCycle enumerate_best_cycle(const ModelParams& params, int max_len) {
    if (max_len < 2) throw std::domain_error("max_len must be >= 2");
    if (max_len > 24) throw std::domain_error("max_len above 24 is combinatorially pointless");

    bool have_best = false;
    BestCycle best;
    long classes = 0;

    for (int L = 2; L <= max_len; ++L) {
        const std::uint32_t last = (1u << L) - 1u;
        double thread_cost = 0.0;
        std::vector<Action> thread_seq;
        bool thread_have = false;
        long thread_classes = 0;

#pragma omp parallel firstprivate(thread_cost, thread_seq, thread_have, thread_classes)
        {
#pragma omp for schedule(static)
            for (std::int64_t bits = 1; bits < static_cast<std::int64_t>(last); ++bits) {
                const auto w = static_cast<std::uint32_t>(bits);
                // process canonical rotation representatives only
                bool canonical = true;
                for (int p = 1; p < L; ++p) {
                    if (rotate_word(w, p, L) < w) {
                        canonical = false;
                        break;
                    }
                }
                if (!canonical) continue;
                ++thread_classes;
                // anchored phases: Q1 at the origin, Q2 just before it
                for (int p = 0; p < L; ++p) {
                    const bool q1_here = ((w >> p) & 1u) == 0;
                    const bool q2_before = ((w >> ((p - 1 + L) % L)) & 1u) == 1;
                    if (!q1_here || !q2_before) continue;
                    Schedule s{word_to_actions(rotate_word(w, p, L), L)};
                    const double cost = schedule_total_cost(params, s);
                    if (!thread_have ||
                        better_candidate(cost, s.actions, thread_cost, thread_seq)) {
                        thread_have = true;
                        thread_cost = cost;
                        thread_seq = std::move(s.actions);
                    }
                }
            }
#pragma omp critical(batchq_enumerate_merge)
            {
                classes += thread_classes;
                if (thread_have &&
                    (!have_best ||
                     better_candidate(thread_cost, thread_seq, best.cost, best.schedule.actions))) {
                    have_best = true;
                    best.cost = thread_cost;
                    best.schedule.actions = std::move(thread_seq);
                }
            }
        }
    }
    best.classes_evaluated = classes;
    return best;
}

std::string to_string(const Schedule& schedule) {
    std::string out;
    for (size_t i = 0; i < schedule.actions.size(); ++i) {
        if (i) out += ' ';
        out += to_string(schedule.actions[i]);
    }
    return out;
}

}  // namespace batchq
