#include "batchq/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include <json.hpp>

namespace batchq {

SolverConfig default_solver_config(const ModelParams& params) {
    SolverConfig config;
    const int base = params.gamma <= 0.8 ? 40 : 80;
    config.xmax = std::max(base, static_cast<int>(std::ceil(5.0 * params.lambda2)));
    config.epsilon = params.gamma <= 0.8 ? 1e-3 : 1e-2;
    return config;
}

SolverConfig resolve_solver_config(const ModelParams& params, SolverConfig config) {
    const SolverConfig defaults = default_solver_config(params);
    if (config.xmax == 0) config.xmax = defaults.xmax;
    if (config.epsilon == 0.0) config.epsilon = defaults.epsilon;
    if (config.xmax < std::ceil(5.0 * params.lambda2)) {
        throw std::invalid_argument("xmax must be at least 5 * max(lambda1, lambda2)");
    }
    if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(config.tail_cutoff > 0.0) || !(config.tail_cutoff < 1.0)) {
        throw std::invalid_argument("tail_cutoff must lie in (0, 1)");
    }
    if (config.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    return config;
}

namespace {

struct ActionValues {
    // serve_q1[y] = E[v(Z1, Z2+y)], serve_q2[x] = E[v(Z1+x, Z2)], grid-clamped
    std::vector<double> serve_q1;
    std::vector<double> serve_q2;
};

// The expectation over (Z1, Z2) collapses to one-dimensional arrays because
// serving Q1 wipes x and serving Q2 wipes y. Summation order inside each
// entry is fixed (z1 outer, z2 inner), so results do not depend on how the
// entries are distributed over threads.
ActionValues conditional_expectations(const TruncatedPmf& pmf1, const TruncatedPmf& pmf2,
                                      std::span<const double> v, int xmax) {
    const int n = xmax + 1;
    const int z1n = static_cast<int>(pmf1.probs.size());
    const int z2n = static_cast<int>(pmf2.probs.size());
    ActionValues ev;
    ev.serve_q1.assign(static_cast<size_t>(n), 0.0);
    ev.serve_q2.assign(static_cast<size_t>(n), 0.0);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < n; ++y) {
        double acc = 0.0;
        for (int z1 = 0; z1 < z1n; ++z1) {
            const double* row = v.data() + static_cast<size_t>(std::min(z1, xmax)) * n;
            double inner = 0.0;
            for (int z2 = 0; z2 < z2n; ++z2) {
                inner += pmf2.probs[static_cast<size_t>(z2)] * row[std::min(z2 + y, xmax)];
            }
            acc += pmf1.probs[static_cast<size_t>(z1)] * inner;
        }
        ev.serve_q1[static_cast<size_t>(y)] = acc;
    }

    // h[x'] = E_{Z2}[v(x', Z2)], then serve_q2[x] = E_{Z1}[h(x + Z1)]
    std::vector<double> h(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
    for (int xp = 0; xp < n; ++xp) {
        const double* row = v.data() + static_cast<size_t>(xp) * n;
        double inner = 0.0;
        for (int z2 = 0; z2 < z2n; ++z2) {
            inner += pmf2.probs[static_cast<size_t>(z2)] * row[std::min(z2, xmax)];
        }
        h[static_cast<size_t>(xp)] = inner;
    }
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (int z1 = 0; z1 < z1n; ++z1) {
            acc += pmf1.probs[static_cast<size_t>(z1)] * h[static_cast<size_t>(std::min(x + z1, xmax))];
        }
        ev.serve_q2[static_cast<size_t>(x)] = acc;
    }
    return ev;
}

}  // namespace

double bellman_sweep(const ModelParams& params, const TruncatedPmf& pmf1,
                     const TruncatedPmf& pmf2, std::span<const double> v_in,
                     std::span<double> v_out, int xmax) {
    const int n = xmax + 1;
    const ActionValues ev = conditional_expectations(pmf1, pmf2, v_in, xmax);
    const double gamma = params.gamma;
    const double lam = params.lambda_bar;
    double delta = 0.0;
#pragma omp parallel for schedule(static) reduction(max : delta)
    for (int x = 0; x < n; ++x) {
        const size_t base = static_cast<size_t>(x) * n;
        const double q2_value = gamma * ev.serve_q2[static_cast<size_t>(x)] + x;
        for (int y = 0; y < n; ++y) {
            const double q1_value = gamma * ev.serve_q1[static_cast<size_t>(y)] + y;
            const double updated = lam + std::min(q1_value, q2_value);
            delta = std::max(delta, std::abs(updated - v_in[base + y]));
            v_out[base + y] = updated;
        }
    }
    return delta;
}

double bellman_sweep_reference(const ModelParams& params, const TruncatedPmf& pmf1,
                               const TruncatedPmf& pmf2, std::span<const double> v_in,
                               std::span<double> v_out, int xmax) {
    const int n = xmax + 1;
    const int z1n = static_cast<int>(pmf1.probs.size());
    const int z2n = static_cast<int>(pmf2.probs.size());
    double delta = 0.0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            double e_serve1 = 0.0;
            double e_serve2 = 0.0;
            for (int z1 = 0; z1 < z1n; ++z1) {
                for (int z2 = 0; z2 < z2n; ++z2) {
                    const double w = pmf1.probs[static_cast<size_t>(z1)] *
                                     pmf2.probs[static_cast<size_t>(z2)];
                    e_serve1 += w * v_in[static_cast<size_t>(std::min(z1, xmax)) * n +
                                         std::min(z2 + y, xmax)];
                    e_serve2 += w * v_in[static_cast<size_t>(std::min(x + z1, xmax)) * n +
                                         std::min(z2, xmax)];
                }
            }
            const double updated =
                params.lambda_bar + std::min(params.gamma * e_serve1 + y,
                                             params.gamma * e_serve2 + x);
            const size_t idx = static_cast<size_t>(x) * n + y;
            delta = std::max(delta, std::abs(updated - v_in[idx]));
            v_out[idx] = updated;
        }
    }
    return delta;
}

std::vector<Action> extract_actions(const ModelParams& params, const TruncatedPmf& pmf1,
                                    const TruncatedPmf& pmf2, std::span<const double> v,
                                    int xmax) {
    const int n = xmax + 1;
    const ActionValues ev = conditional_expectations(pmf1, pmf2, v, xmax);
    std::vector<Action> actions(static_cast<size_t>(n) * n, Action::ServeQ1);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) {
        const double q2_value = params.gamma * ev.serve_q2[static_cast<size_t>(x)] + x;
        for (int y = 0; y < n; ++y) {
            const double q1_value = params.gamma * ev.serve_q1[static_cast<size_t>(y)] + y;
            // ties go to ServeQ1
            actions[static_cast<size_t>(x) * n + y] =
                q1_value <= q2_value ? Action::ServeQ1 : Action::ServeQ2;
        }
    }
    return actions;
}

ValueTable solve(const ModelParams& params, const SolverConfig& raw_config) {
    const SolverConfig config = resolve_solver_config(params, raw_config);
    const TruncatedPmf pmf1 = poisson_pmf(params.lambda1, config.tail_cutoff);
    const TruncatedPmf pmf2 = poisson_pmf(params.lambda2, config.tail_cutoff);
    const int n = config.xmax + 1;
    const double tol =
        config.epsilon * (1.0 - params.gamma) / (2.0 * params.gamma);

    ValueTable table;
    table.xmax = config.xmax;
    table.values.assign(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> scratch(table.values.size(), 0.0);
    table.delta_log.reserve(256);

    double delta = 0.0;
    long sweeps = 0;
    while (true) {
        delta = bellman_sweep(params, pmf1, pmf2, table.values, scratch, config.xmax);
        table.values.swap(scratch);
        table.delta_log.push_back(delta);
        ++sweeps;
        if (delta <= tol) break;
        if (sweeps >= config.max_sweeps) {
            throw ConvergenceError("value iteration hit the sweep cap of " +
                                       std::to_string(config.max_sweeps) +
                                       " with sup-norm change " + std::to_string(delta),
                                   delta, sweeps);
        }
    }
    table.iterations = sweeps;
    table.sup_delta = delta;
    table.actions = extract_actions(params, pmf1, pmf2, table.values, config.xmax);
    return table;
}

const std::vector<Action>& extract_policy(const ValueTable& table) { return table.actions; }

double opt_cost(const ModelParams& params, const ValueTable& table) {
    const long y0 = std::lround(params.lambda2);
    if (y0 > table.xmax) {
        throw std::invalid_argument("round(lambda2) exceeds the table's xmax");
    }
    if (table.action(table.xmax, static_cast<int>(y0)) != Action::ServeQ1) {
        throw std::runtime_error(
            "serving Q2 is greedy at (xmax, round(lambda2)); xmax is too small for "
            "the overloaded-Q1 initial state to be read off the grid edge");
    }
    return table.value(table.xmax, static_cast<int>(y0));
}

// ---------------------------------------------------------------------------
// persistence

namespace {
constexpr int kFormatVersion = 1;
}

void save_value_table(const std::string& path, const ModelParams& params,
                      const SolverConfig& config, const ValueTable& table) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["lambda1"] = params.lambda1;
    j["lambda2"] = params.lambda2;
    j["gamma"] = params.gamma;
    j["xmax"] = table.xmax;
    j["epsilon"] = config.epsilon;
    j["tail_cutoff"] = config.tail_cutoff;
    j["iterations"] = table.iterations;
    j["sup_delta"] = table.sup_delta;
    j["values"] = table.values;
    std::vector<int> acts(table.actions.size());
    std::transform(table.actions.begin(), table.actions.end(), acts.begin(),
                   [](Action a) { return static_cast<int>(a); });
    j["actions"] = acts;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

CachedTable load_value_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format_version").get<int>() != kFormatVersion) {
        throw std::runtime_error(path + ": unsupported format version");
    }
    CachedTable cached;
    cached.params = make_params(j.at("lambda1").get<double>(), j.at("lambda2").get<double>(),
                                j.at("gamma").get<double>());
    cached.config.xmax = j.at("xmax").get<int>();
    cached.config.epsilon = j.at("epsilon").get<double>();
    cached.config.tail_cutoff = j.at("tail_cutoff").get<double>();
    cached.table.xmax = cached.config.xmax;
    cached.table.iterations = j.at("iterations").get<long>();
    cached.table.sup_delta = j.at("sup_delta").get<double>();
    cached.table.values = j.at("values").get<std::vector<double>>();
    const auto acts = j.at("actions").get<std::vector<int>>();
    const size_t n = static_cast<size_t>(cached.table.side()) * cached.table.side();
    if (cached.table.values.size() != n || acts.size() != n) {
        throw std::runtime_error(path + ": grid size does not match xmax");
    }
    cached.table.actions.resize(acts.size());
    std::transform(acts.begin(), acts.end(), cached.table.actions.begin(),
                   [](int a) { return static_cast<Action>(a); });
    return cached;
}

std::string value_table_cache_name(const ModelParams& params, const SolverConfig& config) {
    const SolverConfig resolved = resolve_solver_config(params, config);
    char buf[160];
    std::snprintf(buf, sizeof buf, "vt_l1-%.12g_l2-%.12g_g-%.12g_x%d_e%.12g.json",
                  params.lambda1, params.lambda2, params.gamma, resolved.xmax,
                  resolved.epsilon);
    return buf;
}

}  // namespace batchq
