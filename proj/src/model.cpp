#include "batchq/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace batchq {

ModelParams make_params(double lambda1, double lambda2, double gamma) {
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
        throw std::invalid_argument("lambda1 must be a positive finite rate (got " +
                                    std::to_string(lambda1) + ")");
    }
    if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) {
        throw std::invalid_argument("lambda2 must be a positive finite rate (got " +
                                    std::to_string(lambda2) + ")");
    }
    if (!(gamma > 0.0) || !(gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1) (got " +
                                    std::to_string(gamma) + ")");
    }
    ModelParams p;
    p.swapped = lambda1 > lambda2;
    if (p.swapped) std::swap(lambda1, lambda2);
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.gamma = gamma;
    p.lambda_bar = (lambda1 + lambda2) / 2.0;
    p.r = lambda2 / lambda1;
    return p;
}

const char* to_string(Action a) { return a == Action::ServeQ1 ? "Q1" : "Q2"; }

TruncatedPmf poisson_pmf(double rate, double tail_cutoff) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("rate must be a finite nonnegative number (got " +
                                    std::to_string(rate) + ")");
    }
    if (!(tail_cutoff > 0.0) || !(tail_cutoff < 1.0)) {
        throw std::invalid_argument("tail_cutoff must lie in (0, 1) (got " +
                                    std::to_string(tail_cutoff) + ")");
    }
    TruncatedPmf pmf;
    pmf.rate = rate;
    if (rate == 0.0) {
        pmf.probs = {1.0};
        pmf.tail_mass = 0.0;
        return pmf;
    }
    double p = std::exp(-rate);
    double cdf = p;
    pmf.probs.push_back(p);
    int k = 0;
    // p_k = p_{k-1} * rate / k; stop once the requested mass is covered or the
    // terms underflow (then tail_mass simply keeps the remainder).
    while (cdf < 1.0 - tail_cutoff && p > 0.0) {
        ++k;
        p *= rate / k;
        pmf.probs.push_back(p);
        cdf += p;
    }
    pmf.tail_mass = std::max(0.0, 1.0 - cdf);
    return pmf;
}

int sample_poisson(double rate, std::mt19937_64& rng) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("rate must be a finite nonnegative number (got " +
                                    std::to_string(rate) + ")");
    }
    if (rate == 0.0) return 0;
    std::poisson_distribution<int> dist(rate);
    return dist(rng);
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ splitmix64(index));
    return std::mt19937_64(s);
}

}  // namespace batchq
