#include "gmc/tuner.hpp"

#include <algorithm>
#include <cmath>

#include "gmc/detail/rounding.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {

void require(bool ok, const char* message) {
    if (!ok) {
        throw Error(message);
    }
}

bool is_default(const TuningOptions& options) {
    return options.alpha == 0.25 && options.gamma == 0.5;
}

// Smallest odd k for Lemma E(R^s): k >= 4 p s / q.
std::int64_t cost_floor_k(double moment_order, double s, double q) {
    return detail::least_odd_at_least(4.0 * moment_order * s / q);
}

// Stage-one plan estimating the p-moment on Y_{p,q,K}, 1 <= p <= 2, p < q <= 2p,
// with alpha = 1/4 and gamma = 1/2.
// (1/eps)^2 rather than 1/eps^2: exact for eps = 1/10, 1/4, ...
double inverse_square(double epsilon) {
    const double inv = 1.0 / epsilon;
    return inv * inv;
}

StagePlan moment_plan(double p, double q, double K, const Accuracy& acc,
                      StageOneStatistic statistic) {
    StagePlan plan;
    plan.moment_order = p;
    plan.stage_one = statistic;
    plan.q_tilde = std::min(q, 2.0);
    plan.s = std::max(q / (q - 1.0), 2.0) / p;
    const double cone_power = std::pow(K, p * q / (q - p));
    if (p == 1.0) {
        plan.m = detail::snapped_ceil(3.0 * std::pow(48.0, 1.0 / (q - 1.0)) * cone_power);
    } else {
        plan.m = detail::snapped_ceil(52.0 * std::pow(208.0, p / (q - p)) * cone_power);
    }
    if (q <= 2.0) {
        plan.eta = std::pow(16.0, 1.0 / (q - 1.0)) * std::pow(K * (1.0 / acc.epsilon), q / (q - 1.0));
    } else {
        plan.eta = 16.0 * std::pow(K, q * (2.0 - p) / (q - p)) * inverse_square(acc.epsilon);
    }
    plan.k = std::max(median_trick_k(plan.alpha, acc.delta1), cost_floor_k(p, plan.s, q));
    plan.k_prime = median_trick_k(plan.alpha, acc.delta2);
    if (statistic == StageOneStatistic::kUnbiasedVariance) {
        plan.m = std::max<std::int64_t>(plan.m, 2);
    }
    plan.validate();
    return plan;
}

}  // namespace

Accuracy Accuracy::make(double epsilon, double delta) {
    require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
    return with_split(epsilon, 0.5 * delta, 0.5 * delta);
}

Accuracy Accuracy::with_split(double epsilon, double delta1, double delta2) {
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    require(delta1 > 0.0 && delta2 > 0.0, "stage confidence budgets must be positive");
    const double delta = delta1 + delta2;
    require(delta < 0.5, "delta must lie in (0, 1/2)");
    return Accuracy{epsilon, delta, delta1, delta2};
}

std::int64_t median_trick_k(double alpha, double delta_target) {
    require(alpha > 0.0 && alpha < 0.5, "alpha must lie in (0, 1/2)");
    require(delta_target > 0.0 && delta_target < 0.5, "delta target must lie in (0, 1/2)");
    const double ratio =
        2.0 * std::log(1.0 / (2.0 * delta_target)) / std::log(1.0 / (4.0 * alpha * (1.0 - alpha)));
    return detail::least_odd_at_least(ratio);
}

double median_trick_failure_bound(double alpha, std::int64_t k) {
    return 0.5 * std::pow(4.0 * alpha * (1.0 - alpha), 0.5 * static_cast<double>(k));
}

double embed_K(const ConeSpec& cone, double target_p, double target_q) {
    if (!(target_p >= 1.0 && target_p < target_q && target_q <= cone.q())) {
        throw Error("embedding target unreachable: need 1 <= target_p < target_q <= q");
    }
    // Raise p to target_p at constant K, or lower it by interpolation; then
    // lower q by interpolation. Both give K to the power below.
    const double lower = std::max(cone.p(), target_p);
    const double exponent = (1.0 / target_p - 1.0 / target_q) / (1.0 / lower - 1.0 / cone.q());
    if (exponent == 1.0) {
        return cone.K();
    }
    return std::pow(cone.K(), exponent);
}

StagePlan plan_default(const ConeSpec& cone, const Accuracy& acc, const TuningOptions& options) {
    require(options.alpha > 0.0 && options.alpha < 0.5, "alpha must lie in (0, 1/2)");
    require(options.gamma > 0.0 && options.gamma < 1.0, "gamma must lie in (0, 1)");
    StagePlan plan;
    plan.moment_order = 1.0;
    plan.stage_one = StageOneStatistic::kCentralMoment;
    plan.alpha = options.alpha;
    plan.gamma = options.gamma;
    plan.q_tilde = cone.q_tilde();

    const double qt = plan.q_tilde;
    const double inv = 1.0 / (qt - 1.0);  // 1 at q >= 2
    plan.s = 1.0 + inv;

    if (is_default(options)) {
        const double cone_power = std::pow(cone.K(), cone.pq_exponent());
        if (qt < 2.0) {
            plan.m = detail::snapped_ceil(3.0 * std::pow(48.0, inv) * cone_power);
            plan.eta = std::pow(16.0, inv) * cone_power * std::pow(1.0 / acc.epsilon, plan.s);
        } else {
            plan.m = detail::snapped_ceil(144.0 * cone_power);
            plan.eta = 16.0 * cone_power * inverse_square(acc.epsilon);
        }
    } else {
        // Same derivation with alpha and gamma kept symbolic; reduces to the
        // branch above at alpha = 1/4, gamma = 1/2.
        const double embedded = embed_K(cone, 1.0, qt);
        const double lead = std::pow(2.0, inv - 1.0) * std::pow(options.alpha, -inv);
        plan.m = detail::snapped_ceil(lead * std::pow(3.0 * embedded / options.gamma, plan.s));
        plan.eta = lead * std::pow(embedded / ((1.0 - options.gamma) * acc.epsilon), plan.s);
    }

    plan.k = std::max(median_trick_k(plan.alpha, acc.delta1), cost_floor_k(1.0, plan.s, qt));
    plan.k_prime = median_trick_k(plan.alpha, acc.delta2);
    plan.validate();
    return plan;
}

StagePlan plan_moment_variant(const ConeSpec& cone, const Accuracy& acc) {
    const double p = cone.p();
    const double q = cone.q();
    require(p <= 2.0 && q <= 2.0 * p, "moment variant needs 1 <= p <= 2 and p < q <= 2p");
    return moment_plan(p, q, cone.K(), acc, StageOneStatistic::kCentralMoment);
}

StagePlan plan_variance_variant(const ConeSpec& cone, const Accuracy& acc) {
    require(cone.q() > 2.0, "variance variant needs q > 2");
    const double q = std::min(cone.q(), 4.0);
    const double K = embed_K(cone, 2.0, q);
    return moment_plan(2.0, q, K, acc, StageOneStatistic::kUnbiasedVariance);
}

double expected_cost_bound(const StagePlan& plan, double rho) {
    plan.validate();
    require(rho >= 0.0, "rho must be nonnegative");
    require(plan.alpha == 0.25, "cost bound is derived for alpha = 1/4");
    double moment_growth = std::pow(1.0 + 3.0 * plan.gamma, plan.s) *
                           std::pow(rho, plan.moment_order * plan.s);
    if (plan.stage_one == StageOneStatistic::kUnbiasedVariance) {
        const double m = static_cast<double>(plan.m);
        moment_growth *= std::pow(m / (m - 1.0), plan.s);
    }
    const double k = static_cast<double>(plan.k);
    const double k_prime = static_cast<double>(plan.k_prime);
    return k * static_cast<double>(plan.m) + k_prime * (1.0 + plan.eta * moment_growth);
}

}  // namespace gmc
