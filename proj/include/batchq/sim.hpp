#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "batchq/cyclic.hpp"
#include "batchq/mdp.hpp"
#include "batchq/model.hpp"

namespace batchq {

enum class CostMode {
    ExpectedArrivalWait,  // charge lambda_bar per period for in-period waits
    SampledArrivalWait,   // charge sum of (1 - u) over sampled arrival times
};

struct SimConfig {
    long episodes = 100'000;
    long horizon = -1;  // periods; -1 = default_horizon(params)
    std::uint64_t seed = 1;
    CostMode cost_mode = CostMode::ExpectedArrivalWait;
};

/// Smallest T with gamma^T (lambda2 T + lambda_bar/(1-gamma)) below
/// rel_precision times lambda_bar/(1-gamma).
long default_horizon(const ModelParams& params, double rel_precision = 1e-3);

/// gamma^T (lambda2 T + lambda_bar/(1-gamma)): bound on the discounted cost
/// ignored beyond the horizon.
double horizon_tail_bound(const ModelParams& params, long horizon);

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long episodes = 0;
    std::uint64_t seed = 0;
    long horizon = 0;
    long clamp_events = 0;  // table-policy lookups beyond the grid
};

/// A policy is either a cyclic schedule or a solved action map.
using PolicyRef = std::variant<CyclicPolicy, const ValueTable*>;

/// Monte Carlo estimate of the expected discounted cost of a policy from a
/// fixed initial state. Per period with state (x, y): accrue
/// gamma^t (arrival-wait + y) when serving Q1, gamma^t (arrival-wait + x)
/// when serving Q2; the served queue restarts at that period's arrivals, the
/// other queue accumulates. Episode e draws from make_stream(seed, e), so the
/// estimate is bit-identical for any worker count; aggregation is a pairwise
/// reduction.
SimEstimate simulate(const ModelParams& params, const PolicyRef& policy,
                     QueueState init, const SimConfig& config);

/// Same arrival streams across policies (common random numbers) to shrink
/// comparison variance.
std::vector<SimEstimate> compare_policies(const ModelParams& params,
                                          const std::vector<PolicyRef>& policies,
                                          QueueState init, const SimConfig& config);

/// Deterministic pairwise reduction; independent of chunking used to fill v.
double pairwise_sum(std::span<const double> v);

}  // namespace batchq
