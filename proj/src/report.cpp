#include "batchq/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "batchq/cyclic.hpp"

namespace batchq {

std::string format_fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", std::round(v * 100.0) / 100.0);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::pair<double, double>> table1_grid() {
    std::vector<std::pair<double, double>> grid;
    for (double gamma : {0.6, 0.8, 0.99}) {
        for (double r : {1.0, 3.0, 5.0, 9.0}) grid.emplace_back(gamma, r);
    }
    return grid;
}

RunReport table1_report(const Table1Options& options, const std::string& command_echo) {
    RunReport report;
    report.command = command_echo;
    report.tail_cutoff = options.solver.tail_cutoff;

    for (const auto& [gamma, r] : table1_grid()) {
        const ModelParams params = make_params(1.0, r, gamma);
        const KStarResult ks = optimal_k(params);

        PolicyTableRow row;
        row.gamma = gamma;
        row.r = r;
        row.k_star = ks.k_star;
        row.c1 = total_cost(params, 1);
        row.cr = total_cost(params, static_cast<int>(std::lround(r)));
        row.ck = total_cost(params, ks.k_star);

        if (options.with_opt) {
            const SolverConfig config = resolve_solver_config(params, options.solver);
            try {
                ValueTable table;
                bool from_cache = false;
                std::filesystem::path cache_path;
                if (!options.cache_dir.empty()) {
                    cache_path = std::filesystem::path(options.cache_dir) /
                                 value_table_cache_name(params, config);
                    if (std::filesystem::exists(cache_path)) {
                        CachedTable cached = load_value_table(cache_path.string());
                        if (cached.params.lambda1 == params.lambda1 &&
                            cached.params.lambda2 == params.lambda2 &&
                            cached.params.gamma == params.gamma &&
                            cached.config.xmax == config.xmax &&
                            cached.config.epsilon == config.epsilon) {
                            table = std::move(cached.table);
                            from_cache = true;
                        }
                    }
                }
                if (!from_cache) {
                    table = solve(params, config);
                    if (!options.cache_dir.empty()) {
                        std::filesystem::create_directories(options.cache_dir);
                        save_value_table(cache_path.string(), params, config, table);
                    }
                }
                row.opt = opt_cost(params, table);
                row.gap1_pct = (row.c1 / row.opt - 1.0) * 100.0;
                row.gapr_pct = (row.cr / row.opt - 1.0) * 100.0;
                row.gapk_pct = (row.ck / row.opt - 1.0) * 100.0;
                row.has_opt = true;
                row.xmax = config.xmax;
                row.epsilon = config.epsilon;
                row.sweeps = table.iterations;
            } catch (const ConvergenceError& e) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "gamma=%g r=%g: solver did not converge (%s); row is partial",
                              gamma, r, e.what());
                report.warnings.emplace_back(buf);
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string to_json(const RunReport& report) {
    nlohmann::json j;
    j["command"] = report.command;
    j["tool"] = report.tool;
    j["provenance"] = {{"tail_cutoff", report.tail_cutoff},
                       {"gap_definition", "(C-OPT)/OPT"},
                       {"normalization", "lambda1=1, lambda2=r"}};
    j["warnings"] = report.warnings;
    nlohmann::json rows = nlohmann::json::array();
    for (const PolicyTableRow& row : report.rows) {
        nlohmann::json jr;
        jr["gamma"] = row.gamma;
        jr["r"] = row.r;
        jr["k_star"] = row.k_star;
        jr["c1"] = row.c1;
        jr["cr"] = row.cr;
        jr["c_kstar"] = row.ck;
        if (row.has_opt) {
            jr["opt"] = row.opt;
            jr["gap1_pct"] = row.gap1_pct;
            jr["gapr_pct"] = row.gapr_pct;
            jr["gapkstar_pct"] = row.gapk_pct;
            jr["xmax"] = row.xmax;
            jr["epsilon"] = row.epsilon;
            jr["sweeps"] = row.sweeps;
        }
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j.dump(2);
}

namespace {

std::string num(double v, const char* fmt = "%g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::string to_csv(const RunReport& report) {
    std::string out = "gamma,r,k_star,C1,Cr,Ckstar,OPT,Gap1_pct,Gapr_pct,Gapkstar_pct\n";
    for (const PolicyTableRow& row : report.rows) {
        out += csv_escape(num(row.gamma)) + ',' + csv_escape(num(row.r)) + ',' +
               std::to_string(row.k_star) + ',' + format_fixed2(row.c1) + ',' +
               format_fixed2(row.cr) + ',' + format_fixed2(row.ck) + ',';
        if (row.has_opt) {
            out += format_fixed2(row.opt) + ',' + format_fixed2(row.gap1_pct) + ',' +
                   format_fixed2(row.gapr_pct) + ',' + format_fixed2(row.gapk_pct);
        } else {
            out += ",,,";
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const RunReport& report) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%5s %4s %3s %10s %10s %10s %10s %9s %9s %9s\n",
                  "gamma", "r", "k*", "C(1)", "C(r)", "C(k*)", "OPT", "Gap(1)",
                  "Gap(r)", "Gap(k*)");
    os << line;
    for (const PolicyTableRow& row : report.rows) {
        if (row.has_opt) {
            std::snprintf(line, sizeof line,
                          "%5g %4g %3d %10s %10s %10s %10s %8s%% %8s%% %8s%%\n", row.gamma,
                          row.r, row.k_star, format_fixed2(row.c1).c_str(),
                          format_fixed2(row.cr).c_str(), format_fixed2(row.ck).c_str(),
                          format_fixed2(row.opt).c_str(), format_fixed2(row.gap1_pct).c_str(),
                          format_fixed2(row.gapr_pct).c_str(),
                          format_fixed2(row.gapk_pct).c_str());
        } else {
            std::snprintf(line, sizeof line, "%5g %4g %3d %10s %10s %10s %10s %9s %9s %9s\n",
                          row.gamma, row.r, row.k_star, format_fixed2(row.c1).c_str(),
                          format_fixed2(row.cr).c_str(), format_fixed2(row.ck).c_str(), "-",
                          "-", "-", "-");
        }
        os << line;
    }
    if (!report.rows.empty() && report.rows.front().has_opt) {
        os << "# gaps are (C - OPT)/OPT; solver xmax/epsilon per row: ";
        for (size_t i = 0; i < report.rows.size(); ++i) {
            const auto& row = report.rows[i];
            os << (i ? " " : "") << row.xmax << "/" << num(row.epsilon);
        }
        os << "\n";
    }
    for (const std::string& w : report.warnings) os << "# warning: " << w << "\n";
    return os.str();
}

std::string figure_kstar_csv(const std::vector<double>& gammas, double r_max, double r_step) {
    if (!(r_step > 0.0)) throw std::invalid_argument("r_step must be > 0");
    std::string out = "gamma,r,k_star\n";
    for (double gamma : gammas) {
        const long steps = static_cast<long>(std::floor((r_max - 1.0) / r_step + 1e-12));
        for (long i = 0; i <= steps; ++i) {
            const double r = 1.0 + static_cast<double>(i) * r_step;
            const ModelParams params = make_params(1.0, r, gamma);
            out += csv_escape(num(gamma)) + ',' + csv_escape(num(r)) + ',' +
                   std::to_string(optimal_k(params).k_star) + '\n';
        }
    }
    return out;
}

std::string figure_cost_curve_csv(const ModelParams& params, int k_max) {
    std::string out = "k,cost\n";
    for (const auto& [k, cost] : cost_curve(params, k_max)) {
        out += std::to_string(k) + ',' + format_fixed2(cost) + '\n';
    }
    return out;
}

}  // namespace batchq
