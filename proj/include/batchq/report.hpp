#pragma once

#include <optional>
#include <string>
#include <vector>

#include "batchq/mdp.hpp"
#include "batchq/model.hpp"

namespace batchq {

/// One benchmark-table row: closed-form policy costs, the exact optimum and
/// the relative gaps (C - OPT) / OPT.
struct PolicyTableRow {
    double gamma = 0.0;
    double r = 0.0;
    int k_star = 0;
    double c1 = 0.0;
    double cr = 0.0;
    double ck = 0.0;
    double opt = 0.0;
    double gap1_pct = 0.0;
    double gapr_pct = 0.0;
    double gapk_pct = 0.0;
    bool has_opt = false;
    int xmax = 0;
    double epsilon = 0.0;
    long sweeps = 0;
};

struct RunReport {
    std::string command;
    std::string tool = "batchq";
    double tail_cutoff = 0.0;
    std::vector<PolicyTableRow> rows;
    std::vector<std::string> warnings;  // rows whose solve failed; report is partial
};

struct Table1Options {
    bool with_opt = true;        // solve the MDP column (closed forms only if false)
    SolverConfig solver;         // zero fields resolve to per-row defaults
    std::string cache_dir;       // reuse solved tables when non-empty
};

/// The 12 benchmark configurations: gamma in {0.6, 0.8, 0.99},
/// lambda1 = 1, lambda2 = r in {1, 3, 5, 9}.
std::vector<std::pair<double, double>> table1_grid();

RunReport table1_report(const Table1Options& options, const std::string& command_echo);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
std::string to_text(const RunReport& report);

/// k* against r for several discount factors; columns gamma,r,k_star.
std::string figure_kstar_csv(const std::vector<double>& gammas, double r_max, double r_step);

/// C(k) curve for fixed parameters; columns k,cost.
std::string figure_cost_curve_csv(const ModelParams& params, int k_max);

/// Two decimals, rounding halves away from zero (12.345 -> "12.35",
/// 10.625 -> "10.63").
std::string format_fixed2(double v);

/// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);

}  // namespace batchq
