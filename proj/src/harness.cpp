#include "gmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gmc/detail/summation.hpp"
#include "gmc/error.hpp"
#include "gmc/tuner.hpp"
#include "gmc/two_stage.hpp"

namespace gmc {

namespace {

constexpr double kNoHitFloor = 0.9;
constexpr double kOutOfConeMeanFactor = 4.0;

using Clock = std::chrono::steady_clock;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw Error(message);
    }
}

double nearest_rank(const std::vector<double>& sorted, double level) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(level * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

CostQuantiles quantiles(std::vector<double> costs) {
    std::sort(costs.begin(), costs.end());
    return {nearest_rank(costs, 0.50), nearest_rank(costs, 0.90), nearest_rank(costs, 0.99)};
}

std::optional<double> worst_case_lb(const Distribution& dist, const ConeSpec& cone,
                                    double epsilon, double delta) {
    try {
        if (cone.q() >= 2.0) {
            return wor_lb_variance(central_norm(dist, 2.0), epsilon, delta, cone.K());
        }
        return wor_lb_qnorm(central_norm(dist, cone.q()), epsilon, delta, cone.p(), cone.q(),
                            cone.K());
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Runs the plan once per lane and folds the records in lane order.
ExperimentReport coverage_report(const ExperimentConfig& config, const StagePlan& plan,
                                 const Sampler& sampler, double true_mean, double rho1) {
    const auto start = Clock::now();
    const auto replications = static_cast<std::uint64_t>(config.replications);
    std::vector<RunRecord> records(replications);
    for_each_lane(replications, [&](std::uint64_t lane) {
        Stream stream = derive_stream(config.master_seed, lane);
        records[lane] = run(plan, sampler, stream);
    });

    ExperimentReport report;
    report.config = config;
    report.plan = plan;
    report.true_mean = true_mean;
    report.rho1 = rho1;
    detail::CompensatedSum cost_sum;
    detail::CompensatedSum r_hat_sum;
    std::vector<double> costs;
    costs.reserve(replications);
    report.rows.reserve(replications);
    for (const auto& rec : records) {
        const double error = std::abs(rec.estimate - true_mean);
        if (error > *config.epsilon) {
            ++report.failure_count;
        }
        cost_sum.add(static_cast<double>(rec.total_cost));
        r_hat_sum.add(rec.r_hat);
        costs.push_back(static_cast<double>(rec.total_cost));
        report.rows.push_back(
            {rec.lane_index, rec.estimate, error, rec.n1, rec.m_prime, rec.n2, rec.total_cost});
    }
    const auto n = static_cast<double>(replications);
    report.coverage = 1.0 - static_cast<double>(report.failure_count) / n;
    report.mean_cost = cost_sum.value() / n;
    report.r_hat_mean = r_hat_sum.value() / n;
    report.cost_quantiles = quantiles(std::move(costs));
    report.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

TheoreticalBounds cone_bounds(const StagePlan& plan, const Distribution* dist,
                              const ConeSpec& cone, double epsilon, double delta, double rho1) {
    TheoreticalBounds bounds;
    bounds.expected_cost_bound = expected_cost_bound(plan, rho1);
    bounds.fixed_cost_lb = fixed_cost_lb(cone, delta);
    if (dist != nullptr) {
        bounds.worst_case_lb = worst_case_lb(*dist, cone, epsilon, delta);
    }
    return bounds;
}

ExperimentReport run_coverage(const ExperimentConfig& config) {
    const Distribution& dist = *config.dist;
    const ConeSpec& cone = *config.cone;
    const StagePlan plan = plan_default(cone, Accuracy::make(*config.epsilon, config.delta));
    const double true_mean = mean(dist);
    const double rho1 = central_norm(dist, 1.0);
    const Sampler sampler = [&dist](Stream& s) { return sample(dist, s); };
    ExperimentReport report = coverage_report(config, plan, sampler, true_mean, rho1);
    report.theoretical = cone_bounds(plan, &dist, cone, *config.epsilon, config.delta, rho1);
    return report;
}

SprtHypothesisStats sprt_stats(const AdversaryPair& pair, double delta, int truth,
                               std::int64_t trials, std::uint64_t master_seed,
                               std::uint64_t lane_offset, std::vector<double>* costs) {
    const AdversaryPair mirrored{pair.d2, pair.d1, pair.mean_gap, pair.validity};
    SprtHypothesisStats stats;
    stats.wald_lb = wald_lb(truth == 1 ? pair : mirrored, delta);
    const auto count = static_cast<std::uint64_t>(trials);
    std::vector<SprtOutcome> outcomes(count);
    for_each_lane(count, [&](std::uint64_t i) {
        Stream stream = derive_stream(master_seed, lane_offset + i);
        outcomes[i] = sprt(pair, delta, truth, stream);
    });
    stats.trials = trials;
    detail::CompensatedSum sum;
    for (const auto& o : outcomes) {
        stats.errors += o.decision != truth ? 1 : 0;
        sum.add(static_cast<double>(o.n));
    }
    const auto n = static_cast<double>(trials);
    stats.error_rate = static_cast<double>(stats.errors) / n;
    stats.mean_n = sum.value() / n;
    detail::CompensatedSum sq;
    for (const auto& o : outcomes) {
        const double d = static_cast<double>(o.n) - stats.mean_n;
        sq.add(d * d);
    }
    stats.sd_n = trials > 1 ? std::sqrt(sq.value() / (n - 1.0)) : 0.0;
    if (costs != nullptr) {
        for (const auto& o : outcomes) {
            costs->push_back(static_cast<double>(o.n));
        }
    }
    return stats;
}

ExperimentReport run_sprt(const ExperimentConfig& config) {
    const auto start = Clock::now();
    const AdversaryPair pair{*config.dist, *config.alternative,
                             std::abs(mean(*config.dist) - mean(*config.alternative)),
                             PairValidity{"sprt", 0.0, 0.0, 0.0}};
    const auto trials = static_cast<std::uint64_t>(config.replications);
    std::vector<double> costs;
    SprtSummary summary;
    summary.h1 = sprt_stats(pair, config.delta, 1, config.replications, config.master_seed, 0, &costs);
    summary.h2 =
        sprt_stats(pair, config.delta, 2, config.replications, config.master_seed, trials, nullptr);

    ExperimentReport report;
    report.config = config;
    report.failure_count = summary.h1.errors;
    report.coverage = 1.0 - summary.h1.error_rate;
    report.mean_cost = summary.h1.mean_n;
    report.cost_quantiles = quantiles(std::move(costs));
    report.theoretical.wald_lb = summary.h1.wald_lb;
    report.sprt = summary;
    report.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

}  // namespace

void ExperimentConfig::validate() const {
    require(replications >= 1, "replications must be at least 1");
    switch (mode) {
    case ExperimentMode::kCoverage:
        require(dist && cone && epsilon, "coverage mode needs dist, cone and epsilon");
        require(*epsilon > 0.0, "epsilon must be positive");
        require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
        break;
    case ExperimentMode::kSprt:
        require(dist && alternative, "sprt mode needs dist and alternative");
        require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
        break;
    case ExperimentMode::kOutOfCone:
        require(cone && epsilon && heavy_a, "out_of_cone mode needs cone, epsilon and a");
        require(*epsilon > 0.0, "epsilon must be positive");
        require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
        break;
    }
}

unsigned worker_count() {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GMC_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                workers = static_cast<unsigned>(cap);
            }
        } catch (const std::exception&) {
            // malformed value: keep the default
        }
    }
    return workers;
}

void for_each_lane(std::uint64_t count, const std::function<void(std::uint64_t)>& fn) {
    const auto workers =
        static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(count, 1)));
    if (workers <= 1) {
        for (std::uint64_t lane = 0; lane < count; ++lane) {
            fn(lane);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t lane = next++; lane < count; lane = next++) {
                try {
                    fn(lane);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    switch (config.mode) {
    case ExperimentMode::kCoverage:
        return run_coverage(config);
    case ExperimentMode::kSprt:
        return run_sprt(config);
    case ExperimentMode::kOutOfCone:
        return out_of_cone_demo(*config.cone, *config.epsilon, config.delta, *config.heavy_a,
                                config.replications, config.master_seed);
    }
    throw Error("unknown experiment mode");
}

ExperimentReport run_integration_experiment(const std::function<double(double)>& integrand,
                                            const std::function<double(Stream&)>& point_sampler,
                                            double true_mean, double rho1, const ConeSpec& cone,
                                            double epsilon, double delta,
                                            std::int64_t replications, std::uint64_t master_seed) {
    ExperimentConfig config;
    config.mode = ExperimentMode::kCoverage;
    config.cone = cone;
    config.epsilon = epsilon;
    config.delta = delta;
    config.replications = replications;
    config.master_seed = master_seed;
    require(replications >= 1, "replications must be at least 1");
    const StagePlan plan = plan_default(cone, Accuracy::make(epsilon, delta));
    const Sampler composed = [&](Stream& s) { return integrand(point_sampler(s)); };
    ExperimentReport report = coverage_report(config, plan, composed, true_mean, rho1);
    report.theoretical = cone_bounds(plan, nullptr, cone, epsilon, delta, rho1);
    return report;
}

SprtOutcome sprt(const AdversaryPair& pair, double delta, int truth, Stream& stream) {
    require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
    require(truth == 1 || truth == 2, "truth must be 1 or 2");
    const Discrete* d1 = pair.d1.as_discrete();
    const Discrete* d2 = pair.d2.as_discrete();
    require(d1 != nullptr && d2 != nullptr, "sprt needs discrete laws");
    require(d1->atoms.size() == d2->atoms.size(), "sprt needs a shared finite support");

    // Log-likelihood ratio per atom, indexed like the law we sample from.
    const Discrete& source = truth == 1 ? *d1 : *d2;
    std::vector<double> log_ratio;
    log_ratio.reserve(source.atoms.size());
    for (const auto& atom : source.atoms) {
        double p1 = 0.0;
        double p2 = 0.0;
        for (const auto& a : d1->atoms) {
            if (a.value == atom.value) {
                p1 = a.prob;
            }
        }
        for (const auto& a : d2->atoms) {
            if (a.value == atom.value) {
                p2 = a.prob;
            }
        }
        require(p1 > 0.0 && p2 > 0.0, "sprt needs a shared finite support");
        log_ratio.push_back(std::log(p1 / p2));
    }

    if (std::all_of(log_ratio.begin(), log_ratio.end(), [](double r) { return r == 0.0; })) {
        throw Error("hypotheses indistinguishable: identical laws");
    }

    const double upper = std::log((1.0 - delta) / delta);
    const double slack = 1e-12 * upper;
    double llr = 0.0;
    SprtOutcome outcome;
    while (true) {
        llr += log_ratio[sample_index(source, stream)];
        ++outcome.n;
        if (llr >= upper - slack) {
            outcome.decision = 1;
            return outcome;
        }
        if (llr <= -upper + slack) {
            outcome.decision = 2;
            return outcome;
        }
    }
}

ExperimentReport out_of_cone_demo(const ConeSpec& cone, double epsilon, double delta, double a,
                                  std::int64_t replications, std::uint64_t master_seed) {
    require(epsilon > 0.0, "epsilon must be positive");
    const Distribution heavy = adversary_heavy(a, kOutOfConeMeanFactor * epsilon);
    if (in_cone(heavy, cone)) {
        throw Error("instance does not violate the cone");
    }
    const StagePlan plan = plan_default(cone, Accuracy::make(epsilon, delta));
    // Expected cost when every draw is zero: stage one plus m' = 1.
    const double all_zero_cost = expected_cost_bound(plan, 0.0);
    const double no_hit = std::pow(1.0 - a, all_zero_cost);
    require(no_hit >= kNoHitFloor, "a too large: probability of never sampling the spike is " +
                                       std::to_string(no_hit) + " < 0.9");

    ExperimentConfig config;
    config.mode = ExperimentMode::kOutOfCone;
    config.dist = heavy;
    config.cone = cone;
    config.epsilon = epsilon;
    config.delta = delta;
    config.replications = replications;
    config.master_seed = master_seed;
    config.heavy_a = a;
    config.validate();

    const double true_mean = mean(heavy);
    const double rho1 = central_norm(heavy, 1.0);
    const Sampler sampler = [&heavy](Stream& s) { return sample(heavy, s); };
    ExperimentReport report = coverage_report(config, plan, sampler, true_mean, rho1);
    report.theoretical = cone_bounds(plan, &heavy, cone, epsilon, delta, rho1);
    return report;
}

}  // namespace gmc
