#include "gmc/two_stage.hpp"

#include <cmath>
#include <vector>

#include "gmc/detail/rounding.hpp"
#include "gmc/detail/summation.hpp"
#include "gmc/error.hpp"
#include "gmc/estimators.hpp"

namespace gmc {

void StagePlan::validate() const {
    if (k < 1 || k % 2 == 0 || k_prime < 1 || k_prime % 2 == 0) {
        throw Error("k and k' must be odd positive integers");
    }
    if (m < 1) {
        throw Error("m must be positive");
    }
    if (stage_one == StageOneStatistic::kUnbiasedVariance && m < 2) {
        throw Error("variance stage needs m >= 2");
    }
    if (!(moment_order >= 1.0) || !(s >= 1.0) || !(eta > 0.0) || !std::isfinite(eta)) {
        throw Error("plan needs moment_order >= 1, s >= 1 and finite eta > 0");
    }
    if (!(gamma > 0.0 && gamma < 1.0) || !(alpha > 0.0 && alpha < 0.5)) {
        throw Error("plan needs gamma in (0, 1) and alpha in (0, 1/2)");
    }
    if (!(q_tilde > 1.0 && q_tilde <= 2.0)) {
        throw Error("plan needs q_tilde in (1, 2]");
    }
}

std::int64_t adaptive_sample_size(double eta, double r_hat, double s) {
    const double target = eta * std::pow(r_hat, s);
    if (!(target > 1.0)) {
        return 1;
    }
    return std::max<std::int64_t>(detail::snapped_ceil(target), 1);
}

RunRecord run(const StagePlan& plan, const Sampler& draw, Stream& stream) {
    plan.validate();
    const auto k = static_cast<std::size_t>(plan.k);
    const auto m = static_cast<std::size_t>(plan.m);

    const BlockStatistic dispersion = plan.stage_one == StageOneStatistic::kUnbiasedVariance
                                          ? BlockStatistic::unbiased_variance()
                                          : BlockStatistic::central_moment(plan.moment_order);
    std::vector<double> block(m);
    std::vector<double> per_block;
    per_block.reserve(std::max(k, static_cast<std::size_t>(plan.k_prime)));
    for (std::size_t b = 0; b < k; ++b) {
        for (auto& y : block) {
            y = draw(stream);
        }
        per_block.push_back(apply_statistic(block, dispersion));
    }
    RunRecord record;
    record.r_hat = median(per_block);
    record.m_prime = adaptive_sample_size(plan.eta, record.r_hat, plan.s);
    record.n1 = plan.k * plan.m;

    per_block.clear();
    for (std::int64_t b = 0; b < plan.k_prime; ++b) {
        detail::CompensatedSum sum;
        for (std::int64_t i = 0; i < record.m_prime; ++i) {
            sum.add(draw(stream));
        }
        per_block.push_back(sum.value() / static_cast<double>(record.m_prime));
    }
    record.estimate = median(per_block);
    record.n2 = plan.k_prime * record.m_prime;
    record.total_cost = record.n1 + record.n2;
    record.master_seed = stream.master_seed();
    record.lane_index = stream.lane_index();
    return record;
}

RunRecord estimate_mean(const Distribution& dist, const ConeSpec& cone, double epsilon,
                        double delta, std::uint64_t master_seed, std::uint64_t lane_index) {
    const StagePlan plan = plan_default(cone, Accuracy::make(epsilon, delta));
    Stream stream = derive_stream(master_seed, lane_index);
    const Sampler sampler = [&dist](Stream& s) { return sample(dist, s); };
    return run(plan, sampler, stream);
}

}  // namespace gmc
