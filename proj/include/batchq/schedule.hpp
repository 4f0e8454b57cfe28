#pragma once

#include <string>
#include <vector>

#include "batchq/cyclic.hpp"
#include "batchq/model.hpp"

namespace batchq {

/// Finite service sequence interpreted cyclically (repeated forever).
/// Valid schedules have length >= 2 and serve both queues.
struct Schedule {
    std::vector<Action> actions;
};

/// [Q1, Q2 x k] for a cyclic policy.
Schedule cycle_schedule(const CyclicPolicy& policy);

bool is_valid_schedule(const Schedule& schedule);

/// Expected discounted cost of one cycle embedded in its infinite repetition:
/// sum_t gamma^t (lambda_bar + lambda_o(t) * age_o(t)), where o(t) is the queue
/// not served at position t and age is the number of periods since o(t) was
/// last served, with cyclic wraparound. Throws std::invalid_argument for
/// schedules that do not serve both queues.
double schedule_cycle_cost(const ModelParams& params, const Schedule& schedule);

/// schedule_cycle_cost / (1 - gamma^L). The time origin matters: rotations of
/// the same cycle generally cost differently.
double schedule_total_cost(const ModelParams& params, const Schedule& schedule);

struct BestCycle {
    Schedule schedule;
    double cost = 0.0;
    long classes_evaluated = 0;
};

/// Exhaustive search over all cyclic binary sequences of length 2..max_len,
/// deduplicated up to rotation. Each class is scored at its phases that start
/// with a Q1 service immediately following a Q2 service, the anchoring under
/// which every candidate is comparable from the overloaded-Q1 initial state
/// (a cycle [Q1, Q2 x k] then scores exactly total_cost(k)). Ties resolve to
/// the lexicographically smallest sequence, Q1 < Q2.
BestCycle enumerate_best_cycle(const ModelParams& params, int max_len);

std::string to_string(const Schedule& schedule);

}  // namespace batchq
