#pragma once

#include <cstdint>

namespace gmc {

/// Which dispersion statistic stage one estimates per block.
enum class StageOneStatistic { kCentralMoment, kUnbiasedVariance };

/// Full parameter set of the two-stage median-of-means method.
struct StagePlan {
    double moment_order = 1.0;
    StageOneStatistic stage_one = StageOneStatistic::kCentralMoment;
    std::int64_t k = 1;
    std::int64_t m = 1;
    std::int64_t k_prime = 1;
    double s = 1.0;
    double eta = 1.0;
    double gamma = 0.5;
    double q_tilde = 2.0;
    double alpha = 0.25;

    /// Throws gmc::Error when an invariant (odd k, k', m >= 1, eta > 0, ...) fails.
    void validate() const;

    bool operator==(const StagePlan&) const = default;
};

/// Outcome and cost of one execution.
struct RunRecord {
    double estimate = 0.0;
    double r_hat = 0.0;
    std::int64_t m_prime = 1;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    std::int64_t total_cost = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t lane_index = 0;

    bool operator==(const RunRecord&) const = default;
};

}  // namespace gmc
