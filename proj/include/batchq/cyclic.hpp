#pragma once

#include <utility>
#include <vector>

#include "batchq/model.hpp"

namespace batchq {

/// State-independent policy: serve Q1 once, then Q2 k times, repeat.
struct CyclicPolicy {
    int k = 1;  // consecutive Q2 services per cycle; cycle length is k+1
};

struct KStarResult {
    int k_star = 1;
    double threshold_low = 0.0;   // g(gamma, k*-1)
    double threshold_high = 0.0;  // g(gamma, k*)
    bool tie = false;             // r equals threshold_high exactly
};

/// Expected discounted cost of one steady cycle (Q1, Q2 x k):
/// lambda_bar * sum_{i=0}^{k} gamma^i + lambda2 + lambda1 * sum_{i=1}^{k} i gamma^i.
double cycle_cost(const ModelParams& params, int k);

/// Total discounted cost C(k) = cycle_cost / (1 - gamma^{k+1}) from the
/// overloaded-Q1 initial state.
double total_cost(const ModelParams& params, int k);

/// g(gamma, k) = sum_{i=0}^{k} (k+1-i) gamma^i. Strictly increasing in k;
/// C(k+1) >= C(k) exactly when r <= g(gamma, k).
double threshold_g(double gamma, int k);

/// Smallest k >= 1 with r <= g(gamma, k). Unique minimizer of C(k).
KStarResult optimal_k(const ModelParams& params);

enum class Limit { GammaToOne, GammaToZero };

/// Limit approximations of k*: sqrt(2r) - 1 as gamma -> 1, r as gamma -> 0.
double asymptotic_k(const ModelParams& params, Limit limit);

/// (k, C(k)) for k = 1..k_max.
std::vector<std::pair<int, double>> cost_curve(const ModelParams& params, int k_max);

}  // namespace batchq
