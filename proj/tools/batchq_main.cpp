// Command-line front end: closed-form cyclic policy analysis, exact MDP
// solves, schedule enumeration, Monte Carlo estimates, and the benchmark
// table/figure data emitters.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "batchq/cyclic.hpp"
#include "batchq/mdp.hpp"
#include "batchq/model.hpp"
#include "batchq/report.hpp"
#include "batchq/schedule.hpp"
#include "batchq/sim.hpp"

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads <= 0) {
        if (const char* env = std::getenv("BATCHQ_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

// gamma must be strictly inside (0,1); CLI11's Range is inclusive.
const CLI::Validator OpenUnitInterval(
    [](std::string& s) -> std::string {
        const double v = std::atof(s.c_str());
        if (v > 0.0 && v < 1.0) return {};
        return "value must lie strictly inside (0, 1)";
    },
    "FLOAT in (0,1)", "open_unit_interval");

struct CommonModelFlags {
    double gamma = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

void add_model_flags(CLI::App* cmd, CommonModelFlags& flags) {
    cmd->add_option("--gamma", flags.gamma, "discount factor")
        ->required()
        ->check(OpenUnitInterval);
    cmd->add_option("--l1", flags.l1, "arrival rate of the slow queue")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--l2", flags.l2, "arrival rate of the fast queue")
        ->required()
        ->check(CLI::PositiveNumber);
}

batchq::ValueTable solve_with_cache(const batchq::ModelParams& params,
                                    const batchq::SolverConfig& config,
                                    const std::string& cache_dir) {
    using namespace batchq;
    if (!cache_dir.empty()) {
        const auto path = std::filesystem::path(cache_dir) /
                          value_table_cache_name(params, config);
        if (std::filesystem::exists(path)) {
            CachedTable cached = load_value_table(path.string());
            if (cached.params.lambda1 == params.lambda1 &&
                cached.params.lambda2 == params.lambda2 &&
                cached.params.gamma == params.gamma && cached.config.xmax == config.xmax &&
                cached.config.epsilon == config.epsilon) {
                return std::move(cached.table);
            }
        }
        ValueTable table = solve(params, config);
        std::filesystem::create_directories(cache_dir);
        save_value_table(path.string(), params, config, table);
        return table;
    }
    return solve(params, config);
}

int run(int argc, char** argv) {
    using namespace batchq;

    CLI::App app{"Optimal service policies for a two-queue batch-service system"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (0 = BATCHQ_THREADS env or OpenMP default)");
    const std::string command_echo = join_args(argc, argv);

    // --- optimal-k ---------------------------------------------------------
    auto* cmd_k = app.add_subcommand("optimal-k", "optimal cycle parameter k*");
    double k_gamma = 0.0, k_r = 0.0;
    bool k_json = false;
    cmd_k->add_option("--gamma", k_gamma, "discount factor")->required()->check(OpenUnitInterval);
    cmd_k->add_option("--r", k_r, "arrival rate ratio lambda2/lambda1")
        ->required()
        ->check(CLI::Range(1.0, 1e6));
    cmd_k->add_flag("--json", k_json, "emit JSON");

    // --- table1 ------------------------------------------------------------
    auto* cmd_table = app.add_subcommand("table1", "policy cost table over the benchmark grid");
    bool t_json = false, t_csv = false, t_no_opt = false;
    Table1Options topts;
    auto* jopt = cmd_table->add_flag("--json", t_json, "emit JSON");
    cmd_table->add_flag("--csv", t_csv, "emit CSV")->excludes(jopt);
    cmd_table->add_flag("--no-opt", t_no_opt, "skip the MDP column (closed forms only)");
    cmd_table->add_option("--xmax", topts.solver.xmax, "grid truncation override");
    cmd_table->add_option("--epsilon", topts.solver.epsilon, "value-accuracy override");
    cmd_table->add_option("--max-sweeps", topts.solver.max_sweeps, "value-iteration sweep cap");
    cmd_table->add_option("--cache-dir", topts.cache_dir, "directory for solved value tables");

    // --- figure1 -----------------------------------------------------------
    auto* cmd_fig = app.add_subcommand("figure1", "write k*-vs-r and C(k) curve CSV files");
    std::string fig_out;
    std::vector<double> fig_gammas{0.6, 0.8, 0.99};
    double fig_rmax = 50.0, fig_rstep = 0.5;
    int fig_kmax = 12;
    cmd_fig->add_option("--out", fig_out, "output directory")->required();
    cmd_fig->add_option("--gammas", fig_gammas, "discount factors for the k* panel");
    cmd_fig->add_option("--r-max", fig_rmax, "largest ratio r")->check(CLI::Range(1.0, 1e6));
    cmd_fig->add_option("--r-step", fig_rstep, "ratio step")->check(CLI::PositiveNumber);
    cmd_fig->add_option("--k-max", fig_kmax, "curve length for the C(k) panel")
        ->check(CLI::Range(1, 1000));

    // --- enumerate ---------------------------------------------------------
    auto* cmd_enum = app.add_subcommand("enumerate", "exhaustive search over short cycles");
    CommonModelFlags e_flags;
    add_model_flags(cmd_enum, e_flags);
    int e_maxlen = 8;
    bool e_json = false;
    cmd_enum->add_option("--max-len", e_maxlen, "largest cycle length")
        ->check(CLI::Range(2, 20));
    cmd_enum->add_flag("--json", e_json, "emit JSON");

    // --- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo policy cost estimate");
    CommonModelFlags s_flags;
    add_model_flags(cmd_sim, s_flags);
    std::string s_policy;
    SimConfig s_config;
    std::string s_mode = "expected";
    long s_horizon = -1;
    int s_init_x = -1, s_init_y = -1;
    SolverConfig s_solver;
    std::string s_cache_dir;
    bool s_json = false;
    cmd_sim->add_option("--policy", s_policy, "cyclic:<k>, cyclic:auto, or mdp")->required();
    cmd_sim->add_option("--episodes", s_config.episodes, "episode count")
        ->check(CLI::Range(1L, 1000000000L));
    cmd_sim->add_option("--seed", s_config.seed, "RNG seed");
    cmd_sim->add_option("--mode", s_mode, "expected | sampled arrival waits")
        ->check(CLI::IsMember({"expected", "sampled"}));
    cmd_sim->add_option("--horizon", s_horizon, "periods per episode (-1 = default)");
    cmd_sim->add_option("--init-x", s_init_x, "initial Q1 length (-1 = default)");
    cmd_sim->add_option("--init-y", s_init_y, "initial Q2 length (-1 = default)");
    cmd_sim->add_option("--xmax", s_solver.xmax, "solver grid override (mdp policy)");
    cmd_sim->add_option("--epsilon", s_solver.epsilon, "solver accuracy override (mdp policy)");
    cmd_sim->add_option("--cache-dir", s_cache_dir, "directory for solved value tables");
    cmd_sim->add_flag("--json", s_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    apply_threads(threads);

    if (cmd_k->parsed()) {
        const ModelParams params = make_params(1.0, k_r, k_gamma);
        const KStarResult res = optimal_k(params);
        if (k_json) {
            nlohmann::json j{{"command", command_echo},
                             {"gamma", k_gamma},
                             {"r", k_r},
                             {"k_star", res.k_star},
                             {"threshold_low", res.threshold_low},
                             {"threshold_high", res.threshold_high},
                             {"tie", res.tie}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "k_star=" << res.k_star << " threshold_low=" << res.threshold_low
                      << " threshold_high=" << res.threshold_high
                      << " tie=" << (res.tie ? "true" : "false") << '\n';
        }
        return 0;
    }

    if (cmd_table->parsed()) {
        topts.with_opt = !t_no_opt;
        const RunReport report = table1_report(topts, command_echo);
        if (t_json) {
            std::cout << to_json(report) << '\n';
        } else if (t_csv) {
            std::cout << to_csv(report);
        } else {
            std::cout << to_text(report);
        }
        if (!report.warnings.empty()) {
            for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
            return 3;
        }
        return 0;
    }

    if (cmd_fig->parsed()) {
        std::filesystem::create_directories(fig_out);
        const auto path_a = std::filesystem::path(fig_out) / "figure1a.csv";
        const auto path_b = std::filesystem::path(fig_out) / "figure1b.csv";
        std::ofstream a(path_a);
        a << figure_kstar_csv(fig_gammas, fig_rmax, fig_rstep);
        std::ofstream b(path_b);
        b << figure_cost_curve_csv(make_params(1.0, 9.0, 0.8), fig_kmax);
        if (!a || !b) throw std::runtime_error("failed writing figure CSV files");
        std::cout << "wrote " << path_a.string() << " and " << path_b.string() << '\n';
        return 0;
    }

    if (cmd_enum->parsed()) {
        const ModelParams params = make_params(e_flags.l1, e_flags.l2, e_flags.gamma);
        if (e_maxlen > 16) {
            std::cerr << "note: enumerating all cycles up to length " << e_maxlen
                      << " scans " << (1 << e_maxlen) << " sequences\n";
        }
        const KStarResult ks = optimal_k(params);
        const BestCycle best = enumerate_best_cycle(params, e_maxlen);
        const Schedule reference = cycle_schedule(CyclicPolicy{ks.k_star});
        const bool match = best.schedule.actions == reference.actions;
        if (e_json) {
            nlohmann::json j{{"command", command_echo},
                             {"best_cycle", to_string(best.schedule)},
                             {"cost", best.cost},
                             {"k_star", ks.k_star},
                             {"matches_kstar_cycle", match},
                             {"classes_evaluated", best.classes_evaluated}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "best_cycle=\"" << to_string(best.schedule)
                      << "\" cost=" << format_fixed2(best.cost) << " k_star=" << ks.k_star
                      << " matches_kstar_cycle=" << (match ? "true" : "false") << '\n';
        }
        return 0;
    }

    if (cmd_sim->parsed()) {
        const ModelParams params = make_params(s_flags.l1, s_flags.l2, s_flags.gamma);
        if (params.swapped) {
            std::cerr << "note: queues relabeled so that lambda1 <= lambda2\n";
        }
        s_config.horizon = s_horizon;
        s_config.cost_mode = s_mode == "expected" ? CostMode::ExpectedArrivalWait
                                                  : CostMode::SampledArrivalWait;
        if (std::rint(params.lambda2) != params.lambda2) {
            std::cerr << "note: lambda2 is not an integer; the default initial state "
                         "uses round(lambda2)\n";
        }

        PolicyRef policy = CyclicPolicy{1};
        ValueTable table;
        std::string policy_desc;
        QueueState init;
        init.y = static_cast<int>(std::lround(params.lambda2));
        if (s_policy == "mdp") {
            const SolverConfig config = resolve_solver_config(params, s_solver);
            table = solve_with_cache(params, config, s_cache_dir);
            policy = &table;
            policy_desc = "mdp(xmax=" + std::to_string(config.xmax) + ")";
            init.x = table.xmax;
        } else if (s_policy.rfind("cyclic:", 0) == 0) {
            const std::string arg = s_policy.substr(7);
            int k = 0;
            if (arg == "auto") {
                k = optimal_k(params).k_star;
            } else {
                try {
                    size_t pos = 0;
                    k = std::stoi(arg, &pos);
                    if (pos != arg.size()) throw std::invalid_argument(arg);
                } catch (const std::exception&) {
                    std::cerr << "invalid --policy value '" << s_policy
                              << "'; expected cyclic:<k>, cyclic:auto, or mdp\n";
                    return 2;
                }
                if (k < 1) {
                    std::cerr << "cyclic policy requires k >= 1\n";
                    return 2;
                }
            }
            policy = CyclicPolicy{k};
            policy_desc = "cyclic:" + std::to_string(k);
            init.x = static_cast<int>(std::ceil(10.0 * params.lambda2));
        } else {
            std::cerr << "invalid --policy value '" << s_policy
                      << "'; expected cyclic:<k>, cyclic:auto, or mdp\n";
            return 2;
        }
        if (s_init_x >= 0) init.x = s_init_x;
        if (s_init_y >= 0) init.y = s_init_y;

        const SimEstimate est = simulate(params, policy, init, s_config);
        if (s_json) {
            nlohmann::json j{{"command", command_echo},
                             {"policy", policy_desc},
                             {"mode", s_mode},
                             {"init_x", init.x},
                             {"init_y", init.y},
                             {"mean", est.mean},
                             {"std_error", est.std_error},
                             {"episodes", est.episodes},
                             {"seed", est.seed},
                             {"horizon", est.horizon},
                             {"clamp_events", est.clamp_events}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "policy=" << policy_desc << " mean=" << est.mean
                      << " std_error=" << est.std_error << " episodes=" << est.episodes
                      << " seed=" << est.seed << " horizon=" << est.horizon
                      << " clamp_events=" << est.clamp_events << '\n';
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const batchq::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
