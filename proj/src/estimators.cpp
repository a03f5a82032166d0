#include "gmc/estimators.hpp"

#include <algorithm>
#include <vector>

#include "gmc/detail/summation.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {

void require_nonempty(std::span<const double> block) {
    if (block.empty()) {
        throw Error("empty sample block");
    }
}

// Sum of |d_i - mean(d)|^p with d_i = y_i - y_0.
double pivoted_residual_sum(std::span<const double> block, double p) {
    const double pivot = block.front();
    detail::CompensatedSum shifted;
    for (double y : block) {
        shifted.add(y - pivot);
    }
    const double center = shifted.value() / static_cast<double>(block.size());
    detail::CompensatedSum residuals;
    for (double y : block) {
        residuals.add(detail::abs_pow((y - pivot) - center, p));
    }
    return residuals.value();
}

}  // namespace

double empirical_mean(std::span<const double> block) {
    require_nonempty(block);
    detail::CompensatedSum s;
    for (double y : block) {
        s.add(y);
    }
    return s.value() / static_cast<double>(block.size());
}

double empirical_central_p_moment(std::span<const double> block, double p) {
    require_nonempty(block);
    if (!(p >= 1.0)) {
        throw Error("moment order must satisfy p >= 1");
    }
    return pivoted_residual_sum(block, p) / static_cast<double>(block.size());
}

double unbiased_variance(std::span<const double> block) {
    if (block.size() < 2) {
        throw Error("unbiased variance needs at least two values");
    }
    return pivoted_residual_sum(block, 2.0) / static_cast<double>(block.size() - 1);
}

double median(std::span<const double> values) {
    if (values.empty() || values.size() % 2 == 0) {
        throw Error("median needs an odd, nonzero number of values");
    }
    std::vector<double> scratch(values.begin(), values.end());
    const auto middle = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
    std::nth_element(scratch.begin(), middle, scratch.end());
    return *middle;
}

double apply_statistic(std::span<const double> block, const BlockStatistic& statistic) {
    switch (statistic.kind) {
    case BlockStatistic::Kind::kMean:
        return empirical_mean(block);
    case BlockStatistic::Kind::kCentralMoment:
        return empirical_central_p_moment(block, statistic.order);
    case BlockStatistic::Kind::kUnbiasedVariance:
        return unbiased_variance(block);
    }
    throw Error("unknown block statistic");
}

double median_of_block_statistic(std::span<const double> samples, std::size_t k, std::size_t m,
                                 const BlockStatistic& statistic) {
    if (k == 0 || k % 2 == 0) {
        throw Error("number of blocks must be odd");
    }
    if (m == 0 || samples.size() != k * m) {
        throw Error("sample count must equal k * m");
    }
    std::vector<double> per_block;
    per_block.reserve(k);
    for (std::size_t block = 0; block < k; ++block) {
        per_block.push_back(apply_statistic(samples.subspan(block * m, m), statistic));
    }
    return median(per_block);
}

}  // namespace gmc
