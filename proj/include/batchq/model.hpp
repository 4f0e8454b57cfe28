#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace batchq {

/// Arrival rates and discount factor for the two-queue system.
/// The constructor convention is lambda1 <= lambda2 (Q1 is the slow queue);
/// make_params swaps reversed inputs and records the swap.
struct ModelParams {
    double lambda1 = 0.0;     // slow queue arrival rate, customers/period
    double lambda2 = 0.0;     // fast queue arrival rate, customers/period
    double gamma = 0.0;       // per-period discount factor, in (0,1)
    double lambda_bar = 0.0;  // (lambda1 + lambda2) / 2
    double r = 0.0;           // lambda2 / lambda1, always >= 1
    bool swapped = false;     // inputs arrived as (fast, slow)
};

/// Validates and normalizes. Throws std::invalid_argument naming the bad field.
ModelParams make_params(double lambda1, double lambda2, double gamma);

/// Queue lengths at the start of a period.
struct QueueState {
    int x = 0;  // customers waiting in Q1
    int y = 0;  // customers waiting in Q2
};

/// Which queue the server empties this period.
enum class Action : std::uint8_t { ServeQ1 = 0, ServeQ2 = 1 };

const char* to_string(Action a);

/// Poisson pmf kept up to the point where the CDF reaches 1 - tail_cutoff.
/// sum(probs) + tail_mass == 1 by construction.
struct TruncatedPmf {
    double rate = 0.0;
    std::vector<double> probs;  // mass at 0 .. zmax
    double tail_mass = 0.0;     // discarded probability beyond zmax

    int zmax() const { return static_cast<int>(probs.size()) - 1; }
};

TruncatedPmf poisson_pmf(double rate, double tail_cutoff);

/// Poisson draw; rate 0 always yields 0. Deterministic given the engine state.
int sample_poisson(double rate, std::mt19937_64& rng);

/// Independent stream for (seed, index). Workers that each take their own
/// index produce results independent of scheduling; growing the index range
/// never replays earlier streams.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

}  // namespace batchq
