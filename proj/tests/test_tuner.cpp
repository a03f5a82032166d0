#include <doctest.h>

#include <cmath>

#include "gmc/tuner.hpp"

using namespace gmc;
using doctest::Approx;

TEST_CASE("median trick k") {
    CHECK(median_trick_k(0.25, 0.05) == 17);
    CHECK(median_trick_k(0.25, 0.025) == 21);
    CHECK(median_trick_k(0.25, 0.245) == 5);
    CHECK(median_trick_k(0.25, 0.4999999) == 1);
    for (double alpha : {0.05, 0.1, 0.25, 0.4}) {
        for (double d : {0.001, 0.01, 0.05, 0.2}) {
            const auto k = median_trick_k(alpha, d);
            CHECK(k % 2 == 1);
            CHECK(median_trick_failure_bound(alpha, k) <= d * (1.0 + 1e-12));
            if (k >= 3) {
                CHECK(median_trick_failure_bound(alpha, k - 2) > d);
            }
        }
    }
}

TEST_CASE("accuracy") {
    const auto acc = Accuracy::make(0.1, 0.1);
    CHECK(acc.delta1 == 0.05);
    CHECK(acc.delta2 == 0.05);
    CHECK_THROWS(Accuracy::make(0.0, 0.1));
    CHECK_THROWS(Accuracy::make(0.1, 0.5));
    CHECK_THROWS(Accuracy::make(0.1, 0.0));
    const auto split = Accuracy::with_split(0.1, 0.02, 0.08);
    CHECK(split.delta == Approx(0.1));
}

TEST_CASE("embed_K") {
    CHECK(embed_K(ConeSpec::make(2, 4, 3), 1, 2) == Approx(9.0));
    CHECK(embed_K(ConeSpec::make(3, kInf, 2), 1, 2) == Approx(std::pow(2.0, 1.5)));
    CHECK(embed_K(ConeSpec::make(1, 2, 2.5), 1, 2) == Approx(2.5));
    CHECK(embed_K(ConeSpec::make(2, 5, 2), 1, 5) == Approx(std::pow(2.0, 2.0 * 4.0 / 3.0)));
    CHECK(embed_K(ConeSpec::make(2, kInf, 2), 1, kInf) == Approx(4.0));
    CHECK_THROWS(embed_K(ConeSpec::make(1, 2, 2), 1, 3));
    CHECK_THROWS(embed_K(ConeSpec::make(1, 2, 2), 0.5, 2));
}

TEST_CASE("default plan reproduces the theorem constants") {
    const auto acc = Accuracy::make(0.1, 0.1);
    const auto plan = plan_default(ConeSpec::make(1, 2, 2), acc);
    CHECK(plan.k == 17);
    CHECK(plan.k_prime == 17);
    CHECK(plan.m == 576);
    CHECK(plan.s == 2.0);
    CHECK(plan.eta == 6400.0);
    CHECK(plan.moment_order == 1.0);
    CHECK(plan.gamma == 0.5);
    CHECK(plan.q_tilde == 2.0);

    const auto low_q = plan_default(ConeSpec::make(1, 1.5, 2), Accuracy::make(0.5, 0.1));
    CHECK(low_q.m == 55296);
    CHECK(low_q.s == 3.0);
    CHECK(low_q.eta == Approx(16384.0).epsilon(1e-14));
    CHECK(low_q.k == 17);
    CHECK(low_q.k_prime == 17);
    CHECK(low_q.q_tilde == 1.5);

    const auto inf_q = plan_default(ConeSpec::make(2, kInf, 2), acc);
    CHECK(inf_q.m == 576);
    CHECK(inf_q.s == 2.0);
    CHECK(inf_q.eta == 6400.0);
}

TEST_CASE("k respects the cost-bound floor") {
    // q near 1 forces k >= 4/(q-1) well above the median-trick value.
    const auto plan = plan_default(ConeSpec::make(1, 1.1, 1.2), Accuracy::make(1.0, 0.4));
    CHECK(plan.k >= 40);
    CHECK(plan.k % 2 == 1);
    CHECK(plan.k_prime == median_trick_k(0.25, 0.2));
    const auto loose = plan_default(ConeSpec::make(1, 3, 2), Accuracy::make(1.0, 0.45));
    CHECK(loose.k >= 4);
}

TEST_CASE("branches agree at q = 2") {
    const auto acc = Accuracy::make(0.2, 0.05);
    const auto below = plan_default(ConeSpec::make(1, 2.0 - 1e-12, 1.7), acc);
    const auto at = plan_default(ConeSpec::make(1, 2.0, 1.7), acc);
    CHECK(below.m == at.m);
    CHECK(below.s == Approx(at.s));
    CHECK(below.eta == Approx(at.eta).epsilon(1e-9));
}

TEST_CASE("eta equals the embedded-constant formula") {
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        for (double q : {p + 0.5, p + 2.0, kInf}) {
            const auto cone = ConeSpec::make(p, q, 1.8);
            const auto acc = Accuracy::make(0.3, 0.1);
            const auto plan = plan_default(cone, acc);
            const double qt = std::min(q, 2.0);
            const double embedded = embed_K(cone, 1.0, qt);
            const double s = 1.0 + 1.0 / (qt - 1.0);
            const double eta = std::pow(16.0, 1.0 / (qt - 1.0)) * std::pow(embedded / 0.3, s);
            CHECK(plan.eta == Approx(eta).epsilon(1e-11));
        }
    }
}

TEST_CASE("general alpha and gamma reduce to the defaults") {
    const auto acc = Accuracy::make(0.1, 0.1);
    for (auto cone : {ConeSpec::make(1, 2, 2), ConeSpec::make(1, 1.5, 2), ConeSpec::make(2, 6, 1.5)}) {
        const auto exact = plan_default(cone, acc);
        TuningOptions nudged;
        nudged.alpha = 0.25 * (1.0 + 1e-13);
        const auto general = plan_default(cone, acc, nudged);
        CHECK(general.m == exact.m);
        CHECK(general.eta == Approx(exact.eta).epsilon(1e-9));
        CHECK(general.s == exact.s);
    }
    TuningOptions bad;
    bad.gamma = 1.0;
    CHECK_THROWS(plan_default(ConeSpec::make(1, 2, 2), acc, bad));
}

TEST_CASE("expected cost bound") {
    const auto plan = plan_default(ConeSpec::make(1, 2, 2), Accuracy::make(0.1, 0.1));
    CHECK(expected_cost_bound(plan, 1.0) == 689809.0);
    CHECK(expected_cost_bound(plan, 0.375) == Approx(105434.0).epsilon(1e-14));
    CHECK(expected_cost_bound(plan, 0.0) == 17.0 * 576.0 + 17.0);
    CHECK_THROWS(expected_cost_bound(plan, -1.0));
    TuningOptions options;
    options.alpha = 0.1;
    CHECK_THROWS(expected_cost_bound(plan_default(ConeSpec::make(1, 2, 2), Accuracy::make(0.1, 0.1), options), 1.0));
}

TEST_CASE("cost bound is monotone") {
    double previous_K = 0.0;
    for (double K : {1.1, 1.5, 2.0, 3.0, 5.0}) {
        double previous_rho = 0.0;
        for (double rho : {0.0, 0.1, 0.5, 1.0, 4.0}) {
            const double b = expected_cost_bound(plan_default(ConeSpec::make(1, 2, K), Accuracy::make(0.1, 0.1)), rho);
            CHECK(b >= previous_rho);
            previous_rho = b;
        }
        const double at_one = expected_cost_bound(plan_default(ConeSpec::make(1, 2, K), Accuracy::make(0.1, 0.1)), 1.0);
        CHECK(at_one >= previous_K);
        previous_K = at_one;
    }
    double previous_eps = 0.0;
    for (double eps : {1.0, 0.5, 0.2, 0.1, 0.01}) {
        const double b = expected_cost_bound(plan_default(ConeSpec::make(1, 1.5, 2), Accuracy::make(eps, 0.1)), 1.0);
        CHECK(b >= previous_eps);
        previous_eps = b;
    }
}

TEST_CASE("moment and variance variants") {
    const auto acc = Accuracy::make(0.1, 0.1);
    const auto moment = plan_moment_variant(ConeSpec::make(1.5, 2.5, 2), acc);
    CHECK(moment.moment_order == 1.5);
    CHECK(moment.stage_one == StageOneStatistic::kCentralMoment);
    CHECK(moment.s == Approx(2.0 / 1.5));
    CHECK(moment.m == static_cast<std::int64_t>(std::ceil(52.0 * std::pow(208.0, 1.5) * std::pow(2.0, 3.75))));
    CHECK_THROWS(plan_moment_variant(ConeSpec::make(1.5, 3.5, 2), acc));
    CHECK_THROWS(plan_moment_variant(ConeSpec::make(2.5, 3.5, 2), acc));

    const auto p1 = plan_moment_variant(ConeSpec::make(1, 2, 2), acc);
    const auto d1 = plan_default(ConeSpec::make(1, 2, 2), acc);
    CHECK(p1.m == d1.m);
    CHECK(p1.eta == d1.eta);

    const auto variance = plan_variance_variant(ConeSpec::make(2, 4, 2), acc);
    CHECK(variance.stage_one == StageOneStatistic::kUnbiasedVariance);
    CHECK(variance.moment_order == 2.0);
    CHECK(variance.s == 1.0);
    CHECK(variance.m >= 2);
    CHECK_THROWS(plan_variance_variant(ConeSpec::make(1, 2, 2), acc));
    CHECK(expected_cost_bound(variance, 1.0) > expected_cost_bound(variance, 0.5));
}
