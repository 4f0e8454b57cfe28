#include "batchq/cyclic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace batchq {

namespace {

void require_k(int k) {
    if (k < 1) throw std::domain_error("cycle parameter k must be >= 1 (got " +
                                       std::to_string(k) + ")");
}

}  // namespace

// Sums accumulate term by term instead of using geometric identities; the
// closed forms lose digits to 1-gamma cancellation as gamma -> 1 and only
// appear in tests as a cross-check.
double cycle_cost(const ModelParams& params, int k) {
    require_k(k);
    double s0 = 0.0;  // sum gamma^i, i = 0..k
    double s1 = 0.0;  // sum i gamma^i, i = 1..k
    double gp = 1.0;
    for (int i = 0; i <= k; ++i) {
        s0 += gp;
        if (i >= 1) s1 += i * gp;
        gp *= params.gamma;
    }
    return params.lambda_bar * s0 + params.lambda2 + params.lambda1 * s1;
}

double total_cost(const ModelParams& params, int k) {
    require_k(k);
    double gp = 1.0;
    for (int i = 0; i <= k; ++i) gp *= params.gamma;
    return cycle_cost(params, k) / (1.0 - gp);
}

double threshold_g(double gamma, int k) {
    if (k < 0) throw std::domain_error("threshold index k must be >= 0");
    double s = 0.0;
    double gp = 1.0;
    for (int i = 0; i <= k; ++i) {
        s += (k + 1 - i) * gp;
        gp *= gamma;
    }
    return s;
}

KStarResult optimal_k(const ModelParams& params) {
    // g(gamma, k) = g(gamma, k-1) + sum_{i=0}^{k} gamma^i, so each step costs
    // O(1); g >= k + 1 makes the search end after at most ceil(r) steps.
    KStarResult result;
    double gp = params.gamma;     // gamma^k
    double geo = 1.0 + gp;        // sum gamma^i, i = 0..k
    double g_prev = 1.0;          // g(gamma, k-1)
    double g = g_prev + geo;      // g(gamma, k)
    int k = 1;
    while (params.r > g) {
        ++k;
        gp *= params.gamma;
        geo += gp;
        g_prev = g;
        g += geo;
    }
    result.k_star = k;
    result.threshold_low = g_prev;
    result.threshold_high = g;
    result.tie = params.r == g;
    return result;
}

double asymptotic_k(const ModelParams& params, Limit limit) {
    return limit == Limit::GammaToOne ? std::sqrt(2.0 * params.r) - 1.0 : params.r;
}

std::vector<std::pair<int, double>> cost_curve(const ModelParams& params, int k_max) {
    require_k(k_max);
    std::vector<std::pair<int, double>> curve;
    curve.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) curve.emplace_back(k, total_cost(params, k));
    return curve;
}

}  // namespace batchq
