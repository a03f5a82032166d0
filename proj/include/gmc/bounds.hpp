#pragma once

#include <string>

#include "gmc/distribution.hpp"

namespace gmc {

/// Constraints under which an adversary pair witnesses a lower bound.
struct PairValidity {
    std::string witnesses;   // which bound the pair realizes
    double K = 0.0;          // cone constant both laws satisfy for every p < q
    double radius = 0.0;     // sigma (centered L2 ball) or tau (centered Lq ball)
    double epsilon_limit = 0.0;  // errors below this are separated by the pair
};

/// Two laws on a common finite support whose means differ.
struct AdversaryPair {
    Distribution d1;
    Distribution d2;
    double mean_gap = 0.0;
    PairValidity validity;
};

/// (1/(2 ln 2)) K^{pq/(q-p)} ln(1/delta)
double fixed_cost_lb(const ConeSpec& cone, double delta);

/// (1/(4 ln 3)) (sigma/epsilon)^2 ln(3/(4 delta)) on the cone intersected
/// with the centered L2 ball of radius sigma; needs
/// 0 < epsilon <= min{1 - 2/(K+1), 1/2} sigma and 0 < delta <= 1/4.
double wor_lb_variance(double sigma, double epsilon, double delta, double K);

/// c_{q,K} (tau/epsilon)^{q/(q-1)} ln(3/(4 delta)) on the cone intersected
/// with the centered Lq ball of radius tau, 1 < q <= 2; needs
/// 0 < epsilon <= (1/6)(1 - 1/K) tau and 0 < delta <= 1/4.
double wor_lb_qnorm(double tau, double epsilon, double delta, double p, double q, double K);

/// c_{q,K} = (1/(beta ln 3)) (beta/(2(1+beta)))^{q/(q-1)}, beta = (1 - 3/(1+2K))/2
double qnorm_constant(double q, double K);

/// Wald's bound (1 - 2 delta) ln((1-delta)/delta) / |E ln r(Y1)| on the
/// expected sample size of any test separating d1 from d2 at level delta.
double wald_lb(const AdversaryPair& pair, double delta);

/// E_{d1} ln(P1/P2): the per-sample drift of the log-likelihood ratio.
double log_ratio_drift(const AdversaryPair& pair);

/// Two-point laws on {+sigma, -sigma} with probabilities (1 +- alpha)/2.
AdversaryPair adversary_variance_pair(double sigma, double alpha, double K);
AdversaryPair adversary_variance_pair(double sigma, Rational alpha, double K);

/// Five-point laws whose means are separated by just over 2 epsilon while
/// staying inside Y_{p,q,K} and the centered Lq ball of radius tau.
AdversaryPair adversary_qnorm_pair(double tau, double epsilon, double p, double q, double K);

/// {(0, 1-a), (scale/a, a)}: mean `scale`, kappa unbounded as a -> 0.
Distribution adversary_heavy(double a, double scale);

}  // namespace gmc
