#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gmc/bounds.hpp"
#include "gmc/tuner.hpp"

using namespace gmc;
using doctest::Approx;

TEST_CASE("fixed cost lower bound") {
    CHECK(fixed_cost_lb(ConeSpec::make(1, 2, 2), 0.1) == Approx(6.644).epsilon(1e-4));
    CHECK(fixed_cost_lb(ConeSpec::make(1, 2, 2), 0.1) ==
          Approx(4.0 * std::log(10.0) / (2.0 * std::numbers::ln2)).epsilon(1e-15));
    CHECK(fixed_cost_lb(ConeSpec::make(2, 4, 3), 0.01) ==
          Approx(81.0 * std::log(100.0) / (2.0 * std::numbers::ln2)).epsilon(1e-15));
    CHECK(fixed_cost_lb(ConeSpec::make(2, 4, 3), 0.01) == Approx(269.076).epsilon(1e-5));
    CHECK(fixed_cost_lb(ConeSpec::make(1, 2, 2), 1.0) == 0.0);
    CHECK(fixed_cost_lb(ConeSpec::make(2, kInf, 3), 0.5) == Approx(9.0 / 2.0));
}

TEST_CASE("worst case on the variance ball") {
    CHECK(wor_lb_variance(1, 0.25, 0.25, 2) == Approx(4.0).epsilon(1e-14));
    CHECK(wor_lb_variance(1, 0.1, 0.1, 2) == Approx(45.85).epsilon(1e-4));
    CHECK_THROWS_WITH(wor_lb_variance(1, 0.4, 0.1, 2),
                      doctest::Contains("epsilon must satisfy 0 < epsilon <= min{1 - 2/(K+1), 1/2} * sigma"));
    CHECK_THROWS_WITH(wor_lb_variance(1, 0.1, 0.3, 2), "delta must satisfy 0 < delta <= 1/4");
    CHECK_THROWS(wor_lb_variance(1, 0.1, 0.1, 1.0));
}

TEST_CASE("worst case on the Lq ball") {
    CHECK(qnorm_constant(2, 2) == Approx(0.031606).epsilon(1e-5));
    CHECK(wor_lb_qnorm(1, 0.05, 0.1, 1, 2, 2) == Approx(25.47).epsilon(1e-3));
    CHECK_THROWS_WITH(wor_lb_qnorm(1, 0.2, 0.1, 1, 2, 2),
                      doctest::Contains("epsilon must satisfy 0 < epsilon <= (1/6)(1 - 1/K) * tau"));
    CHECK_THROWS(wor_lb_qnorm(1, 0.05, 0.1, 1, 3, 2));
    // The constant vanishes as K -> 1.
    CHECK(qnorm_constant(1.5, 1.0001) < 1e-6);
}

TEST_CASE("Wald bound") {
    const auto half = adversary_variance_pair(1.0, Rational(1, 2), 3.0);
    CHECK(wald_lb(half, 0.1) == Approx(3.20).epsilon(1e-3));
    CHECK(wald_lb(half, 0.1) ==
          Approx(0.8 * std::log(9.0) / (0.5 * std::log(3.0))).epsilon(1e-14));
    const auto tenth = adversary_variance_pair(1.0, 0.1, 2.0);
    CHECK(wald_lb(tenth, 0.25) == Approx(27.37).epsilon(1e-3));
    CHECK(log_ratio_drift(tenth) == Approx(0.1 * std::log(11.0 / 9.0)).epsilon(1e-13));

    const auto same = Distribution::discrete({{1.0, 0.5}, {-1.0, 0.5}});
    const AdversaryPair identical{same, same, 0.0, {}};
    CHECK_THROWS_WITH(wald_lb(identical, 0.1), "hypotheses indistinguishable: identical laws");
    const AdversaryPair disjoint{Distribution::discrete({{1.0, 1.0}}),
                                 Distribution::discrete({{2.0, 1.0}}), 1.0, {}};
    CHECK_THROWS(wald_lb(disjoint, 0.1));
}

TEST_CASE("variance adversary pair") {
    const auto pair = adversary_variance_pair(1.0, 1.0 / 3.0, 2.0);
    CHECK(mean(pair.d1) == Approx(1.0 / 3.0));
    CHECK(mean(pair.d2) == Approx(-1.0 / 3.0));
    CHECK(pair.mean_gap == Approx(2.0 / 3.0));
    CHECK(kappa(pair.d1, 1, 2) <= 2.0);
    CHECK(central_norm(pair.d1, 2) == Approx(std::sqrt(1.0 - 1.0 / 9.0)).epsilon(1e-14));
    CHECK_NOTHROW(adversary_variance_pair(1.0, 0.5, 3.0));
    CHECK_THROWS(adversary_variance_pair(1.0, 0.5, 2.0));
    CHECK_THROWS(adversary_variance_pair(1.0, 0.0, 2.0));

    for (double K : {1.5, 2.0, 3.0, 10.0}) {
        const double alpha = std::min(1.0 - 2.0 / (K + 1.0), 0.5);
        const auto exact = adversary_variance_pair(2.0, alpha, K);
        for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{1.0, kInf}, std::pair{1.5, 3.0},
                            std::pair{2.0, kInf}, std::pair{3.0, 7.0}}) {
            const auto cone = ConeSpec::make(p, q, K);
            CHECK(in_cone(exact.d1, cone));
            CHECK(in_cone(exact.d2, cone));
        }
        CHECK(central_norm(exact.d1, 2.0) <= 2.0);
    }

    const auto rational = adversary_variance_pair(1.0, Rational(1, 3), 2.0);
    REQUIRE(rational.d1.as_discrete()->exact.has_value());
    CHECK((*rational.d1.as_discrete()->exact)[0] == Rational(2, 3));
}

TEST_CASE("q-norm adversary pair") {
    const double tau = 1.0;
    const double eps = 0.05;
    const auto pair = adversary_qnorm_pair(tau, eps, 1, 2, 2);
    const double beta = 0.2;
    const double tau_inner = tau / (1.0 + beta);
    CHECK(tau_inner == Approx(0.8333333333));
    const double gamma = std::pow(2.0 * eps / (beta * tau_inner), 2.0);
    CHECK(gamma == Approx(0.36));
    CHECK(pair.mean_gap > 2.0 * eps);
    CHECK(pair.mean_gap == Approx(2.0 * eps).epsilon(1e-5));
    CHECK(mean(pair.d1) - mean(pair.d2) == Approx(pair.mean_gap).epsilon(1e-12));
    for (const auto* d : {&pair.d1, &pair.d2}) {
        double total = 0.0;
        for (const auto& a : d->as_discrete()->atoms) {
            total += a.prob;
        }
        CHECK(total == Approx(1.0).epsilon(1e-15));
        CHECK(in_cone(*d, ConeSpec::make(1, 2, 2)));
        CHECK(central_norm(*d, 2.0) <= tau);
    }
    CHECK_THROWS(adversary_qnorm_pair(tau, 0.09, 1, 2, 2));
    CHECK_THROWS(adversary_qnorm_pair(tau, 1.0 / 12.0, 1, 2, 2));

    for (double q : {1.2, 1.5, 2.0}) {
        for (double K : {1.5, 2.0, 4.0}) {
            const double limit = (1.0 - 1.0 / K) * tau / 6.0;
            for (double p : {1.0, 0.5 * (1.0 + q)}) {
                const auto qp = adversary_qnorm_pair(tau, 0.5 * limit, p, q, K);
                CHECK(in_cone(qp.d1, ConeSpec::make(p, q, K)));
                CHECK(in_cone(qp.d2, ConeSpec::make(p, q, K)));
                CHECK(central_norm(qp.d1, q) <= tau * (1.0 + 1e-12));
                CHECK(qp.mean_gap > 2.0 * 0.5 * limit);
            }
        }
    }
}

TEST_CASE("heavy law") {
    const auto half = adversary_heavy(0.5, 1.0);
    const auto& atoms = half.as_discrete()->atoms;
    CHECK(atoms[0].value == 0.0);
    CHECK(atoms[1].value == 2.0);
    CHECK(mean(half) == 1.0);
    const auto thin = adversary_heavy(1e-4, 1.0);
    CHECK(mean(thin) == Approx(1.0));
    CHECK(kappa(thin, 1, 2) == Approx(50.0025).epsilon(1e-6));
    CHECK_FALSE(in_cone(thin, ConeSpec::make(1, 2, 2)));
    const double n = 10000.0;
    CHECK(std::pow(1.0 - 1e-7, n) > 0.99);
    CHECK_THROWS(adversary_heavy(0.0, 1.0));
    CHECK_THROWS(adversary_heavy(0.5, -1.0));
}

TEST_CASE("lower bounds never exceed the matching upper bound") {
    for (double K : {1.5, 2.0, 4.0}) {
        for (double delta : {0.01, 0.1, 0.25}) {
            const auto cone = ConeSpec::make(1, 2, K);
            const double limit = std::min(1.0 - 2.0 / (K + 1.0), 0.5);
            for (double frac : {0.2, 0.5, 1.0}) {
                const double eps = frac * limit;
                const auto pair = adversary_variance_pair(1.0, eps, K);
                const auto plan = plan_default(cone, Accuracy::make(eps, delta));
                const double upper = expected_cost_bound(plan, central_norm(pair.d1, 1.0));
                CHECK(wor_lb_variance(1.0, eps, delta, K) <= upper);
                CHECK(wald_lb(pair, delta) <= upper);
                CHECK(fixed_cost_lb(cone, delta) <= upper);
            }
            // The pair needs epsilon strictly inside the range; at the limit
            // its tail weight would reach 1.
            const double qlimit = (1.0 - 1.0 / K) / 6.0;
            for (double frac : {0.2, 0.5, 0.99}) {
                const double eps = frac * qlimit;
                const auto pair = adversary_qnorm_pair(1.0, eps, 1, 2, K);
                const auto plan = plan_default(cone, Accuracy::make(eps, delta));
                const double upper = expected_cost_bound(plan, central_norm(pair.d1, 1.0));
                CHECK(wor_lb_qnorm(1.0, eps, delta, 1, 2, K) <= upper);
                CHECK(wald_lb(pair, delta) <= upper);
            }
        }
    }
}

TEST_CASE("Wald bound of the variance pair dominates the closed form") {
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        for (double delta : {0.001, 0.01, 0.1, 0.2, 0.25}) {
            const double wald = (1.0 - 2.0 * delta) * std::log((1.0 - delta) / delta) /
                                (alpha * std::log((1.0 + alpha) / (1.0 - alpha)));
            CHECK(wald >= wor_lb_variance(1.0, alpha, delta, 3.0));
            CHECK(wald_lb(adversary_variance_pair(1.0, alpha, 3.0), delta) ==
                  Approx(wald).epsilon(1e-12));
        }
    }
}
