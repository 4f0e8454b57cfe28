#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchq/model.hpp"

namespace batchq {

struct SolverConfig {
    int xmax = 0;              // 0 = default for the parameters
    double epsilon = 0.0;      // target value accuracy; 0 = default for gamma
    double tail_cutoff = 1e-12;
    long max_sweeps = 1'000'000;
};

/// xmax = max(40 for gamma <= 0.8 / 80 otherwise, ceil(5 * lambda2)),
/// epsilon = 1e-3 for gamma <= 0.8, 1e-2 otherwise.
SolverConfig default_solver_config(const ModelParams& params);

/// Fills in zero fields with defaults and validates the rest.
SolverConfig resolve_solver_config(const ModelParams& params, SolverConfig config);

/// Value function and greedy actions on the truncated grid 0..xmax squared.
struct ValueTable {
    int xmax = 0;
    std::vector<double> values;       // (xmax+1)^2, row-major by x
    std::vector<Action> actions;      // same layout
    long iterations = 0;
    double sup_delta = 0.0;           // final sup-norm change
    std::vector<double> delta_log;    // sup-norm change per sweep

    int side() const { return xmax + 1; }
    double value(int x, int y) const { return values[static_cast<size_t>(x) * side() + y]; }
    Action action(int x, int y) const { return actions[static_cast<size_t>(x) * side() + y]; }
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double delta, long sweeps)
        : std::runtime_error(what), sup_delta(delta), iterations(sweeps) {}
    double sup_delta;
    long iterations;
};

/// One synchronous update of the optimality recursion on the clamped grid:
///   v_out(x,y) = lambda_bar + min(gamma E[v(Z1, Z2+y)] + y,
///                                 gamma E[v(Z1+x, Z2)] + x)
/// with transitions clamped to xmax. Returns the sup-norm change. The two
/// conditional expectations depend only on y resp. x and are precomputed as
/// one-dimensional arrays; states are processed in parallel. Output is
/// bit-identical for any thread count.
double bellman_sweep(const ModelParams& params, const TruncatedPmf& pmf1,
                     const TruncatedPmf& pmf2, std::span<const double> v_in,
                     std::span<double> v_out, int xmax);

/// Serial reference: direct double sum over (z1, z2) per state, no
/// precomputation. Kept for tests and the kernel benchmark.
double bellman_sweep_reference(const ModelParams& params, const TruncatedPmf& pmf1,
                               const TruncatedPmf& pmf2, std::span<const double> v_in,
                               std::span<double> v_out, int xmax);

/// Greedy actions for a value grid; ties go to ServeQ1.
std::vector<Action> extract_actions(const ModelParams& params, const TruncatedPmf& pmf1,
                                    const TruncatedPmf& pmf2, std::span<const double> v,
                                    int xmax);

/// Value iteration from v = 0 until sup_delta <= epsilon (1-gamma) / (2 gamma),
/// which puts the result within epsilon of the truncated fixed point.
/// Throws ConvergenceError if max_sweeps is exhausted.
ValueTable solve(const ModelParams& params, const SolverConfig& config);

/// Action map of a solved table (recorded from the final values).
const std::vector<Action>& extract_policy(const ValueTable& table);

/// V(M, round(lambda2)) with M = xmax: the optimal cost from the
/// overloaded-Q1 initial state. Throws if serving Q2 is greedy there
/// (xmax too small for the overloaded-queue argument to apply).
double opt_cost(const ModelParams& params, const ValueTable& table);

/// Versioned JSON persistence: header with parameters, row-major value grid,
/// action grid.
void save_value_table(const std::string& path, const ModelParams& params,
                      const SolverConfig& config, const ValueTable& table);

struct CachedTable {
    ModelParams params;
    SolverConfig config;
    ValueTable table;
};

CachedTable load_value_table(const std::string& path);

/// Stable cache file name keyed by (lambda1, lambda2, gamma, xmax, epsilon).
std::string value_table_cache_name(const ModelParams& params, const SolverConfig& config);

}  // namespace batchq
