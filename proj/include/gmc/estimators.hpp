#pragma once

#include <cstddef>
#include <span>

namespace gmc {

/// Per-block statistic used inside a median-of-blocks estimate.
struct BlockStatistic {
    enum class Kind { kMean, kCentralMoment, kUnbiasedVariance };

    Kind kind = Kind::kMean;
    double order = 1.0;  // only read for kCentralMoment

    static BlockStatistic mean() { return {Kind::kMean, 1.0}; }
    static BlockStatistic central_moment(double p) { return {Kind::kCentralMoment, p}; }
    static BlockStatistic unbiased_variance() { return {Kind::kUnbiasedVariance, 2.0}; }
};

double empirical_mean(std::span<const double> block);

/// (1/m) sum |Y_i - mean|^p. Residuals are taken against the first value
/// before averaging, so adding a constant to exactly-representable data
/// leaves the result bit-for-bit unchanged.
double empirical_central_p_moment(std::span<const double> block, double p);

/// Sample variance with divisor m - 1; needs m >= 2.
double unbiased_variance(std::span<const double> block);

/// Middle order statistic of an odd-length collection.
double median(std::span<const double> values);

double apply_statistic(std::span<const double> block, const BlockStatistic& statistic);

/// Splits samples into k consecutive blocks of m and returns the median of
/// the per-block statistic.
double median_of_block_statistic(std::span<const double> samples, std::size_t k, std::size_t m,
                                 const BlockStatistic& statistic);

}  // namespace gmc
