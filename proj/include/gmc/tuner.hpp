#pragma once

#include <cstdint>

#include "gmc/distribution.hpp"
#include "gmc/plan.hpp"

namespace gmc {

/// Target accuracy: error at most epsilon with probability >= 1 - delta,
/// delta split between the two stages.
struct Accuracy {
    double epsilon;
    double delta;
    double delta1;
    double delta2;

    /// Even split delta1 = delta2 = delta / 2.
    static Accuracy make(double epsilon, double delta);
    static Accuracy with_split(double epsilon, double delta1, double delta2);
};

/// Advanced knobs. The defaults reproduce the published constants exactly.
struct TuningOptions {
    double alpha = 0.25;  // per-block failure probability before the median
    double gamma = 0.5;   // relative accuracy of the stage-one moment
};

/// Least odd k with k >= 2 ln(1/(2 delta_target)) / ln(1/(4 alpha (1 - alpha))).
std::int64_t median_trick_k(double alpha, double delta_target);

/// (1/2) (4 alpha (1 - alpha))^{k/2}: failure bound of a median of k
/// independent estimates that each fail with probability alpha.
double median_trick_failure_bound(double alpha, std::int64_t k);

/// K' with Y_{p,q,K} contained in Y_{target_p,target_q,K'}.
/// Requires 1 <= target_p < target_q <= q.
double embed_K(const ConeSpec& cone, double target_p, double target_q);

/// First-moment plan A_{k,1,m}^{k',s,eta} for the cone (p, q, K).
StagePlan plan_default(const ConeSpec& cone, const Accuracy& acc, const TuningOptions& options = {});

/// Stage one estimates the cone's own p-moment; needs 1 <= p <= 2 and p < q <= 2p.
StagePlan plan_moment_variant(const ConeSpec& cone, const Accuracy& acc);

/// Stage one uses the unbiased variance estimator; needs q > 2.
StagePlan plan_variance_variant(const ConeSpec& cone, const Accuracy& acc);

/// Upper bound on the expected cost for an input in the cone whose central
/// norm of order plan.moment_order equals rho:
/// k m + k' (1 + eta (1 + 3 gamma)^s rho^{moment_order * s}).
double expected_cost_bound(const StagePlan& plan, double rho);

}  // namespace gmc
