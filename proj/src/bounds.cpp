#include "gmc/bounds.hpp"

#include <cmath>
#include <numbers>

#include "gmc/error.hpp"

namespace gmc {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kThresholdMargin = 1e-6;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw Error(message);
    }
}

double ln3() { return std::log(3.0); }

double variance_alpha_limit(double K) { return std::min(1.0 - 2.0 / (K + 1.0), 0.5); }

double qnorm_beta(double K) { return 0.5 * (1.0 - 3.0 / (1.0 + 2.0 * K)); }

void check_delta_quarter(double delta) {
    require(delta > 0.0 && delta <= 0.25, "delta must satisfy 0 < delta <= 1/4");
}

}  // namespace

double fixed_cost_lb(const ConeSpec& cone, double delta) {
    require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
    return std::pow(cone.K(), cone.pq_exponent()) * std::log(1.0 / delta) /
           (2.0 * std::numbers::ln2);
}

double wor_lb_variance(double sigma, double epsilon, double delta, double K) {
    require(sigma > 0.0, "sigma must be positive");
    require(K > 1.0, "K must exceed 1");
    const double limit = variance_alpha_limit(K) * sigma;
    require(epsilon > 0.0 && epsilon <= limit * (1.0 + kRangeSlack),
            "epsilon must satisfy 0 < epsilon <= min{1 - 2/(K+1), 1/2} * sigma = " +
                std::to_string(limit));
    check_delta_quarter(delta);
    const double ratio = sigma / epsilon;
    return ratio * ratio * std::log(3.0 / (4.0 * delta)) / (4.0 * ln3());
}

double qnorm_constant(double q, double K) {
    require(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
    require(K > 1.0, "K must exceed 1");
    const double beta = qnorm_beta(K);
    return std::pow(beta / (2.0 * (1.0 + beta)), q / (q - 1.0)) / (beta * ln3());
}

double wor_lb_qnorm(double tau, double epsilon, double delta, double p, double q, double K) {
    require(tau > 0.0, "tau must be positive");
    require(p >= 1.0 && p < q, "p must satisfy 1 <= p < q");
    require(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
    require(K > 1.0, "K must exceed 1");
    const double limit = (1.0 - 1.0 / K) * tau / 6.0;
    require(epsilon > 0.0 && epsilon <= limit * (1.0 + kRangeSlack),
            "epsilon must satisfy 0 < epsilon <= (1/6)(1 - 1/K) * tau = " + std::to_string(limit));
    check_delta_quarter(delta);
    return qnorm_constant(q, K) * std::pow(tau / epsilon, q / (q - 1.0)) *
           std::log(3.0 / (4.0 * delta));
}

double log_ratio_drift(const AdversaryPair& pair) {
    const Discrete* d1 = pair.d1.as_discrete();
    const Discrete* d2 = pair.d2.as_discrete();
    require(d1 != nullptr && d2 != nullptr, "adversary pair must be discrete");
    require(d1->atoms.size() == d2->atoms.size(), "adversary pair must share a finite support");
    double drift = 0.0;
    for (const auto& a : d1->atoms) {
        const Atom* match = nullptr;
        for (const auto& b : d2->atoms) {
            if (b.value == a.value) {
                match = &b;
                break;
            }
        }
        require(match != nullptr, "adversary pair must share a finite support");
        drift += a.prob * std::log(a.prob / match->prob);
    }
    return drift;
}

double wald_lb(const AdversaryPair& pair, double delta) {
    require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
    const double drift = log_ratio_drift(pair);
    if (drift == 0.0) {
        throw Error("hypotheses indistinguishable: identical laws");
    }
    return (1.0 - 2.0 * delta) * std::log((1.0 - delta) / delta) / std::abs(drift);
}

AdversaryPair adversary_variance_pair(double sigma, double alpha, double K) {
    require(sigma > 0.0, "sigma must be positive");
    require(K > 1.0, "K must exceed 1");
    require(alpha > 0.0 && alpha <= variance_alpha_limit(K) * (1.0 + kRangeSlack),
            "alpha must satisfy 0 < alpha <= min{1 - 2/(K+1), 1/2}");
    const double up = 0.5 * (1.0 + alpha);
    const double down = 0.5 * (1.0 - alpha);
    return AdversaryPair{
        Distribution::discrete({{sigma, up}, {-sigma, down}}),
        Distribution::discrete({{sigma, down}, {-sigma, up}}),
        2.0 * alpha * sigma,
        PairValidity{"variance ball", K, sigma, alpha * sigma},
    };
}

AdversaryPair adversary_variance_pair(double sigma, Rational alpha, double K) {
    const double alpha_value = boost::rational_cast<double>(alpha);
    AdversaryPair pair = adversary_variance_pair(sigma, alpha_value, K);
    const Rational half{1, 2};
    const Rational up = half * (Rational{1} + alpha);
    const Rational down = half * (Rational{1} - alpha);
    pair.d1 = Distribution::discrete_exact({{sigma, up}, {-sigma, down}});
    pair.d2 = Distribution::discrete_exact({{sigma, down}, {-sigma, up}});
    return pair;
}

AdversaryPair adversary_qnorm_pair(double tau, double epsilon, double p, double q, double K) {
    require(tau > 0.0, "tau must be positive");
    require(p >= 1.0 && p < q, "p must satisfy 1 <= p < q");
    require(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
    require(K > 1.0, "K must exceed 1");
    const double beta = qnorm_beta(K);
    const double tau_inner = tau / (1.0 + beta);
    require(epsilon > 0.0 && epsilon < 0.5 * beta * tau_inner,
            "epsilon must satisfy 0 < epsilon < beta * tau' / 2 = " +
                std::to_string(0.5 * beta * tau_inner));
    const double gamma = (1.0 + kThresholdMargin) *
                         std::pow(2.0 * epsilon / (beta * tau_inner), q / (q - 1.0));
    require(gamma < 1.0, "epsilon too close to its limit: tail weight would reach 1");

    const double far = std::pow(gamma, -1.0 / q) * tau_inner;
    const double side = 0.5 * (1.0 - beta);
    const double centre = beta * (1.0 - gamma);
    const double heavy = 0.75 * beta * gamma;
    const double light = 0.25 * beta * gamma;
    const double half_gap = 0.5 * beta * std::pow(gamma, 1.0 - 1.0 / q) * tau_inner;
    return AdversaryPair{
        Distribution::discrete(
            {{-tau_inner, side}, {tau_inner, side}, {0.0, centre}, {far, heavy}, {-far, light}}),
        Distribution::discrete(
            {{-tau_inner, side}, {tau_inner, side}, {0.0, centre}, {far, light}, {-far, heavy}}),
        2.0 * half_gap,
        PairValidity{"Lq ball", K, tau, half_gap},
    };
}

Distribution adversary_heavy(double a, double scale) {
    require(a > 0.0 && a < 1.0, "a must lie in (0, 1)");
    require(scale > 0.0 && std::isfinite(scale), "scale must be positive");
    return Distribution::discrete({{0.0, 1.0 - a}, {scale / a, a}});
}

}  // namespace gmc
