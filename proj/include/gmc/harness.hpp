#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gmc/bounds.hpp"
#include "gmc/distribution.hpp"
#include "gmc/plan.hpp"
#include "gmc/rand_streams.hpp"

namespace gmc {

enum class ExperimentMode { kCoverage, kSprt, kOutOfCone };

/// Which fields are required depends on the mode:
///   coverage     dist, cone, epsilon
///   sprt         dist (hypothesis 1), alternative (hypothesis 2)
///   out_of_cone  cone, epsilon, heavy_a (dist is built from them)
struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::kCoverage;
    std::optional<Distribution> dist;
    std::optional<Distribution> alternative;
    std::optional<ConeSpec> cone;
    std::optional<double> epsilon;
    double delta = 0.1;
    std::int64_t replications = 1;
    std::uint64_t master_seed = 0;
    std::optional<double> heavy_a;

    void validate() const;
};

struct CostQuantiles {
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
};

struct TheoreticalBounds {
    std::optional<double> expected_cost_bound;
    std::optional<double> fixed_cost_lb;
    std::optional<double> worst_case_lb;
    std::optional<double> wald_lb;
};

/// One replication, as written to the per-replication CSV.
struct ReplicationRow {
    std::uint64_t lane = 0;
    double estimate = 0.0;
    double error = 0.0;
    std::int64_t n1 = 0;
    std::int64_t m_prime = 0;
    std::int64_t n2 = 0;
    std::int64_t total_cost = 0;
};

struct SprtHypothesisStats {
    std::int64_t trials = 0;
    std::int64_t errors = 0;
    double error_rate = 0.0;
    double mean_n = 0.0;
    double sd_n = 0.0;
    double wald_lb = 0.0;
};

struct SprtSummary {
    SprtHypothesisStats h1;
    SprtHypothesisStats h2;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::int64_t failure_count = 0;
    double coverage = 0.0;
    double mean_cost = 0.0;
    CostQuantiles cost_quantiles;
    std::optional<double> r_hat_mean;
    std::optional<double> true_mean;
    std::optional<double> rho1;
    std::optional<StagePlan> plan;
    TheoreticalBounds theoretical;
    std::optional<SprtSummary> sprt;
    double wall_time_seconds = 0.0;

    /// Per-replication detail; kept out of the JSON report.
    std::vector<ReplicationRow> rows;
};

/// Worker threads for replications: GMC_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Calls fn(lane) for lane in [0, count) across worker threads.
void for_each_lane(std::uint64_t count, const std::function<void(std::uint64_t)>& fn);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Coverage experiment for integration: Y = f(X) with X ~ point_sampler.
/// The exact mean and first central norm of f(X) are supplied by the caller.
ExperimentReport run_integration_experiment(const std::function<double(double)>& integrand,
                                            const std::function<double(Stream&)>& point_sampler,
                                            double true_mean, double rho1, const ConeSpec& cone,
                                            double epsilon, double delta,
                                            std::int64_t replications, std::uint64_t master_seed);

struct SprtOutcome {
    int decision = 0;  // 1 or 2
    std::int64_t n = 0;
};

/// Wald's sequential probability ratio test between pair.d1 and pair.d2,
/// sampling from d1 (truth = 1) or d2 (truth = 2).
SprtOutcome sprt(const AdversaryPair& pair, double delta, int truth, Stream& stream);

/// Runs the cone-tuned method on adversary_heavy(a, 4 epsilon), a law outside
/// the cone that the method almost never sees off zero.
ExperimentReport out_of_cone_demo(const ConeSpec& cone, double epsilon, double delta, double a,
                                  std::int64_t replications, std::uint64_t master_seed);

}  // namespace gmc
