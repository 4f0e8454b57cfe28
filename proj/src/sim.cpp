#include "batchq/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace batchq {

long default_horizon(const ModelParams& params, double rel_precision) {
    if (!(rel_precision > 0.0)) throw std::invalid_argument("rel_precision must be > 0");
    const double scale = params.lambda_bar / (1.0 - params.gamma);
    const double target = rel_precision * scale;
    long horizon = 1;
    while (horizon_tail_bound(params, horizon) >= target) {
        ++horizon;
        if (horizon > 100'000'000L) {
            throw std::runtime_error("default horizon search did not terminate");
        }
    }
    return horizon;
}

double horizon_tail_bound(const ModelParams& params, long horizon) {
    return std::pow(params.gamma, static_cast<double>(horizon)) *
           (params.lambda2 * static_cast<double>(horizon) +
            params.lambda_bar / (1.0 - params.gamma));
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t mid = v.size() / 2;
    return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

namespace {

// One sample path. The per-period draw order (z1, z2, then any arrival-time
// uniforms) never depends on the action taken, so episodes replay identically
// across policies under a shared stream.
template <typename PolicyFn>
double run_episode(const ModelParams& params, PolicyFn&& policy_at, QueueState init,
                   long horizon, CostMode mode, std::mt19937_64& rng, long& clamp_events) {
    long long x = init.x;
    long long y = init.y;
    double total = 0.0;
    double disc = 1.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long t = 0; t < horizon; ++t) {
        const Action a = policy_at(t, x, y, clamp_events);
        const int z1 = sample_poisson(params.lambda1, rng);
        const int z2 = sample_poisson(params.lambda2, rng);
        double arrival_wait;
        if (mode == CostMode::ExpectedArrivalWait) {
            arrival_wait = params.lambda_bar;
        } else {
            arrival_wait = 0.0;
            for (int j = 0; j < z1 + z2; ++j) arrival_wait += 1.0 - unif(rng);
        }
        const double carried = a == Action::ServeQ1 ? static_cast<double>(y)
                                                    : static_cast<double>(x);
        total += disc * (arrival_wait + carried);
        if (a == Action::ServeQ1) {
            x = z1;
            y += z2;
        } else {
            x += z1;
            y = z2;
        }
        disc *= params.gamma;
    }
    return total;
}

template <typename PolicyFn>
SimEstimate run_all(const ModelParams& params, PolicyFn&& policy_at, QueueState init,
                    const SimConfig& config, long horizon) {
    const long n = config.episodes;
    std::vector<double> costs(static_cast<size_t>(n), 0.0);
    std::vector<long> clamps(static_cast<size_t>(n), 0);

#pragma omp parallel for schedule(static)
    for (long e = 0; e < n; ++e) {
        std::mt19937_64 rng =
            make_stream(config.seed, static_cast<std::uint64_t>(e));
        costs[static_cast<size_t>(e)] =
            run_episode(params, policy_at, init, horizon, config.cost_mode, rng,
                        clamps[static_cast<size_t>(e)]);
    }

    SimEstimate est;
    est.episodes = n;
    est.seed = config.seed;
    est.horizon = horizon;
    est.mean = pairwise_sum(costs) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(costs.size());
        for (size_t i = 0; i < costs.size(); ++i) {
            const double d = costs[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    for (long c : clamps) est.clamp_events += c;
    return est;
}

}  // namespace

SimEstimate simulate(const ModelParams& params, const PolicyRef& policy, QueueState init,
                     const SimConfig& config) {
    if (config.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (init.x < 0 || init.y < 0) throw std::invalid_argument("initial state must be nonnegative");
    const long horizon = config.horizon >= 0 ? config.horizon : default_horizon(params);

    if (const auto* cyclic = std::get_if<CyclicPolicy>(&policy)) {
        if (cyclic->k < 1) throw std::invalid_argument("cyclic policy requires k >= 1");
        const long cycle_len = cyclic->k + 1;
        return run_all(
            params,
            [cycle_len](long t, long long, long long, long&) {
                return t % cycle_len == 0 ? Action::ServeQ1 : Action::ServeQ2;
            },
            init, config, horizon);
    }
    const ValueTable* table = std::get<const ValueTable*>(policy);
    if (table == nullptr) throw std::invalid_argument("value-table policy is null");
    const int xmax = table->xmax;
    return run_all(
        params,
        [table, xmax](long, long long x, long long y, long& clamp_events) {
            if (x > xmax || y > xmax) ++clamp_events;
            const int cx = static_cast<int>(std::min<long long>(x, xmax));
            const int cy = static_cast<int>(std::min<long long>(y, xmax));
            return table->action(cx, cy);
        },
        init, config, horizon);
}

std::vector<SimEstimate> compare_policies(const ModelParams& params,
                                          const std::vector<PolicyRef>& policies,
                                          QueueState init, const SimConfig& config) {
    std::vector<SimEstimate> out;
    out.reserve(policies.size());
    for (const PolicyRef& p : policies) out.push_back(simulate(params, p, init, config));
    return out;
}

}  // namespace batchq
