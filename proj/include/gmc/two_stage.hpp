#pragma once

#include <cstdint>
#include <functional>

#include "gmc/distribution.hpp"
#include "gmc/plan.hpp"
#include "gmc/rand_streams.hpp"
#include "gmc/tuner.hpp"

namespace gmc {

using Sampler = std::function<double(Stream&)>;

/// m' = max{ceil(eta * r_hat^s), 1}
std::int64_t adaptive_sample_size(double eta, double r_hat, double s);

/// Stage one draws k*m values and takes the median of k block dispersion
/// estimates; stage two draws k'*m' fresh values and returns the median of
/// k' block means. Every draw comes from `draw(stream)` in order.
RunRecord run(const StagePlan& plan, const Sampler& draw, Stream& stream);

/// Runs the default plan for (cone, epsilon, delta) on i.i.d. draws of dist.
/// Cone membership is not checked.
RunRecord estimate_mean(const Distribution& dist, const ConeSpec& cone, double epsilon,
                        double delta, std::uint64_t master_seed, std::uint64_t lane_index);

/// Same as estimate_mean with Y = f(X), X drawn by point_sampler.
template <class Point>
RunRecord integrate(const std::function<double(const Point&)>& integrand,
                    const std::function<Point(Stream&)>& point_sampler, const ConeSpec& cone,
                    double epsilon, double delta, std::uint64_t master_seed,
                    std::uint64_t lane_index);

template <class Point>
RunRecord integrate(const std::function<double(const Point&)>& integrand,
                    const std::function<Point(Stream&)>& point_sampler, const ConeSpec& cone,
                    double epsilon, double delta, std::uint64_t master_seed,
                    std::uint64_t lane_index) {
    const StagePlan plan = plan_default(cone, Accuracy::make(epsilon, delta));
    Stream stream = derive_stream(master_seed, lane_index);
    const Sampler composed = [&](Stream& s) { return integrand(point_sampler(s)); };
    return run(plan, composed, stream);
}

}  // namespace gmc
