#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "batchq/cyclic.hpp"

using namespace batchq;

namespace {

// geometric closed forms, used only as an independent cross-check route
double closed_cycle_cost(const ModelParams& p, int k) {
    const double g = p.gamma;
    const double s0 = (1.0 - std::pow(g, k + 1)) / (1.0 - g);
    const double s1 =
        g * (1.0 - (k + 1) * std::pow(g, k) + k * std::pow(g, k + 1)) / ((1.0 - g) * (1.0 - g));
    return p.lambda_bar * s0 + p.lambda2 + p.lambda1 * s1;
}

}  // namespace

TEST_CASE("cycle_cost against hand-evaluated points") {
    CHECK(cycle_cost(make_params(1, 1, 0.6), 1) == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(cycle_cost(make_params(1, 9, 0.8), 4) == doctest::Approx(31.0624).epsilon(1e-12));
    // gamma -> 0: only the t = 0 terms survive
    const ModelParams tiny = make_params(2, 7, 1e-9);
    CHECK(cycle_cost(tiny, 1) ==
          doctest::Approx(tiny.lambda_bar + tiny.lambda2).epsilon(1e-6));
    CHECK_THROWS_AS(cycle_cost(make_params(1, 1, 0.5), 0), std::domain_error);
}

TEST_CASE("total_cost against benchmark values") {
    CHECK(total_cost(make_params(1, 1, 0.6), 1) == doctest::Approx(5.00).epsilon(1e-12));
    CHECK(total_cost(make_params(1, 9, 0.8), 4) == doctest::Approx(46.201808662541666).epsilon(1e-12));
    CHECK(total_cost(make_params(1, 1, 0.99), 1) == doctest::Approx(200.0).epsilon(1e-9));
    CHECK_THROWS_AS(total_cost(make_params(1, 1, 0.5), -1), std::domain_error);
}

TEST_CASE("accumulated sums agree with the geometric closed forms") {
    for (double gamma : {0.1, 0.5, 0.9, 0.99}) {
        for (double r : {1.0, 2.0, 5.0, 9.0}) {
            const ModelParams p = make_params(1.0, r, gamma);
            for (int k = 1; k <= 25; ++k) {
                CHECK(cycle_cost(p, k) ==
                      doctest::Approx(closed_cycle_cost(p, k)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("threshold_g spot values and growth") {
    CHECK(threshold_g(0.3, 0) == 1.0);
    CHECK(threshold_g(0.99, 0) == 1.0);
    CHECK(threshold_g(0.8, 4) == doctest::Approx(11.5536).epsilon(1e-12));
    CHECK(threshold_g(0.99, 2) == doctest::Approx(5.9601).epsilon(1e-12));
    for (double gamma : {0.1, 0.5, 0.9, 0.999}) {
        double prev = threshold_g(gamma, 0);
        for (int k = 1; k <= 60; ++k) {
            const double g = threshold_g(gamma, k);
            CHECK(g > prev);
            prev = g;
        }
    }
    CHECK_THROWS_AS(threshold_g(0.5, -1), std::domain_error);
}

TEST_CASE("optimal_k on the benchmark grid") {
    CHECK(optimal_k(make_params(1, 9, 0.8)).k_star == 4);
    CHECK(optimal_k(make_params(1, 9, 0.99)).k_star == 3);
    CHECK(optimal_k(make_params(1, 1, 0.6)).k_star == 1);
    CHECK(optimal_k(make_params(1, 5, 0.8)).k_star == 2);

    const KStarResult res = optimal_k(make_params(1, 9, 0.8));
    CHECK(res.threshold_low == doctest::Approx(8.192).epsilon(1e-12));
    CHECK(res.threshold_high == doctest::Approx(11.5536).epsilon(1e-12));
    CHECK(res.threshold_low < 9.0);
    CHECK(9.0 <= res.threshold_high);
    CHECK_FALSE(res.tie);
}

TEST_CASE("optimal_k tie goes to the smaller k") {
    // g(0.5, 1) = 2.5 exactly; r = 2.5 ties and stays at k = 1
    const KStarResult res = optimal_k(make_params(1.0, 2.5, 0.5));
    CHECK(res.k_star == 1);
    CHECK(res.tie);
    CHECK(total_cost(make_params(1.0, 2.5, 0.5), 1) ==
          doctest::Approx(total_cost(make_params(1.0, 2.5, 0.5), 2)).epsilon(1e-12));
}

TEST_CASE("condition-based search matches cost comparison on a grid") {
    for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        for (int r = 1; r <= 50; ++r) {
            const ModelParams p = make_params(1.0, static_cast<double>(r), gamma);
            const int ks = optimal_k(p).k_star;
            const int kmax = 4 * (ks + 2);
            double prev = total_cost(p, 1);
            for (int k = 2; k <= kmax; ++k) {
                const double cur = total_cost(p, k);
                // increments flip sign exactly where threshold_g crosses r
                const double slack = 1e-9 * std::abs(cur);
                if (r <= threshold_g(gamma, k - 1)) {
                    CHECK(cur >= prev - slack);
                } else {
                    CHECK(cur <= prev + slack);
                }
                if (k <= ks) CHECK(cur <= prev + slack);
                if (k > ks) CHECK(cur >= prev - slack);
                prev = cur;
            }
        }
    }
}

TEST_CASE("k_star is nonincreasing in gamma and scale-free") {
    for (int r = 1; r <= 50; ++r) {
        int prev = 1 << 20;
        for (double gamma : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
            const int ks = optimal_k(make_params(1.0, static_cast<double>(r), gamma)).k_star;
            CHECK(ks <= prev);
            prev = ks;
        }
    }
    // C(k) scales linearly with the rates; k* depends only on (gamma, r)
    const ModelParams base = make_params(1, 9, 0.8);
    const ModelParams scaled = make_params(3, 27, 0.8);
    CHECK(optimal_k(scaled).k_star == optimal_k(base).k_star);
    for (int k = 1; k <= 12; ++k) {
        CHECK(total_cost(scaled, k) == doctest::Approx(3.0 * total_cost(base, k)).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic_k limit formulas") {
    CHECK(asymptotic_k(make_params(1, 9, 0.5), Limit::GammaToOne) ==
          doctest::Approx(std::sqrt(18.0) - 1.0).epsilon(1e-15));
    CHECK(asymptotic_k(make_params(1, 2, 0.5), Limit::GammaToOne) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(asymptotic_k(make_params(1, 5, 0.5), Limit::GammaToZero) == 5.0);
}

TEST_CASE("k_star approaches the limit formulas") {
    for (int r = 2; r <= 50; ++r) {
        const int hi = optimal_k(make_params(1.0, static_cast<double>(r), 0.999)).k_star;
        CHECK(std::abs(hi - std::lround(std::sqrt(2.0 * r) - 1.0)) <= 1);
        const int lo = optimal_k(make_params(1.0, static_cast<double>(r), 0.001)).k_star;
        CHECK(lo >= r - 1);
        CHECK(lo <= r);
    }
}

TEST_CASE("cost_curve shape") {
    const ModelParams p = make_params(1, 9, 0.8);
    const auto curve = cost_curve(p, 10);
    REQUIRE(curve.size() == 10);
    int argmin = 0;
    for (int i = 1; i < 10; ++i) {
        if (curve[static_cast<size_t>(i)].second < curve[static_cast<size_t>(argmin)].second)
            argmin = i;
    }
    CHECK(curve[static_cast<size_t>(argmin)].first == 4);
    CHECK(curve[3].second == doctest::Approx(46.201808662541666).epsilon(1e-12));

    const auto single = cost_curve(make_params(1, 1, 0.6), 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].first == 1);
    CHECK(single[0].second == doctest::Approx(5.0).epsilon(1e-12));
}
