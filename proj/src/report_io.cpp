#include "gmc/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "gmc/error.hpp"

namespace gmc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json real_to_json(double x) {
    if (x == kInf) {
        return "inf";
    }
    return x;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double real_field(const Json& j, const char* key) { return real_from_json(field(j, key)); }

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& value) {
    if (value) {
        j[key] = *value;
    }
}

std::optional<double> optional_real(const Json& j, const char* key) {
    if (j.contains(key) && !j.at(key).is_null()) {
        return real_from_json(j.at(key));
    }
    return std::nullopt;
}

std::string mode_name(ExperimentMode mode) {
    switch (mode) {
    case ExperimentMode::kCoverage:
        return "coverage";
    case ExperimentMode::kSprt:
        return "sprt";
    case ExperimentMode::kOutOfCone:
        return "out_of_cone";
    }
    throw Error("unknown experiment mode");
}

ExperimentMode mode_from_name(const std::string& name) {
    if (name == "coverage") {
        return ExperimentMode::kCoverage;
    }
    if (name == "sprt") {
        return ExperimentMode::kSprt;
    }
    if (name == "out_of_cone") {
        return ExperimentMode::kOutOfCone;
    }
    throw Error("unknown experiment mode '" + name + "'");
}

Json to_json(const SprtHypothesisStats& s) {
    return Json{{"trials", s.trials},   {"errors", s.errors}, {"error_rate", s.error_rate},
                {"mean_n", s.mean_n},   {"sd_n", s.sd_n},     {"wald_lb", s.wald_lb}};
}

SprtHypothesisStats sprt_stats_from_json(const Json& j) {
    SprtHypothesisStats s;
    s.trials = field(j, "trials").get<std::int64_t>();
    s.errors = field(j, "errors").get<std::int64_t>();
    s.error_rate = real_field(j, "error_rate");
    s.mean_n = real_field(j, "mean_n");
    s.sd_n = real_field(j, "sd_n");
    s.wald_lb = real_field(j, "wald_lb");
    return s;
}

}  // namespace

double parse_real(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "+inf") {
        return kInf;
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error("malformed number '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw Error("malformed number '" + text + "'");
    }
    return value;
}

double real_from_json(const Json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return parse_real(j.get<std::string>());
    }
    throw Error("expected a number");
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        const std::string num_text = text.substr(0, slash);
        const std::int64_t num = std::stoll(num_text, &used);
        if (used != num_text.size()) {
            throw Error("");
        }
        std::int64_t den = 1;
        if (slash != std::string::npos) {
            const std::string den_text = text.substr(slash + 1);
            den = std::stoll(den_text, &used);
            if (used != den_text.size() || den == 0) {
                throw Error("");
            }
        }
        return Rational{num, den};
    } catch (const std::exception&) {
        throw Error("malformed rational '" + text + "'");
    }
}

Json to_json(const Distribution& dist) {
    return std::visit(
        Overloaded{
            [](const Discrete& d) {
                Json atoms = Json::array();
                for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                    if (d.exact) {
                        const Rational& r = (*d.exact)[i];
                        const std::string text = r.denominator() == 1
                                                     ? std::to_string(r.numerator())
                                                     : std::to_string(r.numerator()) + "/" +
                                                           std::to_string(r.denominator());
                        atoms.push_back(Json::array({d.atoms[i].value, text}));
                    } else {
                        atoms.push_back(Json::array({d.atoms[i].value, d.atoms[i].prob}));
                    }
                }
                return Json{{"kind", "discrete"}, {"atoms", atoms}};
            },
            [](const Normal& d) { return Json{{"kind", "normal"}, {"mu", d.mu}, {"sigma", d.sigma}}; },
            [](const Exponential& d) { return Json{{"kind", "exponential"}, {"rate", d.rate}}; },
            [](const LogNormal& d) {
                return Json{{"kind", "lognormal"}, {"mu", d.mu}, {"sigma", d.sigma}};
            },
            [](const Pareto& d) {
                return Json{{"kind", "pareto"}, {"scale", d.scale}, {"shape", d.shape}};
            },
            [](const Uniform& d) { return Json{{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}}; },
        },
        dist.kind());
}

Distribution distribution_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "discrete") {
        const Json& atoms = field(j, "atoms");
        if (!atoms.is_array() || atoms.empty()) {
            throw Error("discrete law needs a nonempty 'atoms' array");
        }
        bool all_exact = true;
        for (const auto& atom : atoms) {
            if (!atom.is_array() || atom.size() != 2) {
                throw Error("each atom must be [value, probability]");
            }
            all_exact = all_exact && atom[1].is_string();
        }
        if (all_exact) {
            std::vector<std::pair<double, Rational>> exact;
            for (const auto& atom : atoms) {
                exact.emplace_back(real_from_json(atom[0]), parse_rational(atom[1].get<std::string>()));
            }
            return Distribution::discrete_exact(exact);
        }
        std::vector<Atom> plain;
        for (const auto& atom : atoms) {
            double prob = 0.0;
            if (atom[1].is_string()) {
                prob = boost::rational_cast<double>(parse_rational(atom[1].get<std::string>()));
            } else {
                prob = real_from_json(atom[1]);
            }
            plain.push_back({real_from_json(atom[0]), prob});
        }
        return Distribution::discrete(std::move(plain));
    }
    if (kind == "normal") {
        return Distribution::normal(real_field(j, "mu"), real_field(j, "sigma"));
    }
    if (kind == "exponential") {
        return Distribution::exponential(real_field(j, "rate"));
    }
    if (kind == "lognormal") {
        return Distribution::lognormal(real_field(j, "mu"), real_field(j, "sigma"));
    }
    if (kind == "pareto") {
        return Distribution::pareto(real_field(j, "scale"), real_field(j, "shape"));
    }
    if (kind == "uniform") {
        return Distribution::uniform(real_field(j, "lo"), real_field(j, "hi"));
    }
    throw Error("unknown distribution kind '" + kind + "'");
}

Json to_json(const ConeSpec& cone) {
    return Json{{"p", cone.p()}, {"q", real_to_json(cone.q())}, {"K", cone.K()}};
}

ConeSpec cone_from_json(const Json& j) {
    return ConeSpec::make(real_field(j, "p"), real_field(j, "q"), real_field(j, "K"));
}

Json to_json(const StagePlan& plan) {
    return Json{
        {"moment_order", plan.moment_order},
        {"stage_one", plan.stage_one == StageOneStatistic::kUnbiasedVariance ? "unbiased_variance"
                                                                             : "central_moment"},
        {"k", plan.k},
        {"m", plan.m},
        {"k_prime", plan.k_prime},
        {"s", plan.s},
        {"eta", plan.eta},
        {"gamma", plan.gamma},
        {"q_tilde", plan.q_tilde},
        {"alpha", plan.alpha},
    };
}

StagePlan plan_from_json(const Json& j) {
    StagePlan plan;
    plan.moment_order = real_field(j, "moment_order");
    const std::string stage = field(j, "stage_one").get<std::string>();
    if (stage == "unbiased_variance") {
        plan.stage_one = StageOneStatistic::kUnbiasedVariance;
    } else if (stage == "central_moment") {
        plan.stage_one = StageOneStatistic::kCentralMoment;
    } else {
        throw Error("unknown stage_one statistic '" + stage + "'");
    }
    plan.k = field(j, "k").get<std::int64_t>();
    plan.m = field(j, "m").get<std::int64_t>();
    plan.k_prime = field(j, "k_prime").get<std::int64_t>();
    plan.s = real_field(j, "s");
    plan.eta = real_field(j, "eta");
    plan.gamma = real_field(j, "gamma");
    plan.q_tilde = real_field(j, "q_tilde");
    plan.alpha = real_field(j, "alpha");
    plan.validate();
    return plan;
}

Json to_json(const RunRecord& r) {
    return Json{{"estimate", r.estimate},       {"r_hat", r.r_hat}, {"m_prime", r.m_prime},
                {"n1", r.n1},                   {"n2", r.n2},       {"total_cost", r.total_cost},
                {"master_seed", r.master_seed}, {"lane_index", r.lane_index}};
}

RunRecord run_record_from_json(const Json& j) {
    RunRecord r;
    r.estimate = real_field(j, "estimate");
    r.r_hat = real_field(j, "r_hat");
    r.m_prime = field(j, "m_prime").get<std::int64_t>();
    r.n1 = field(j, "n1").get<std::int64_t>();
    r.n2 = field(j, "n2").get<std::int64_t>();
    r.total_cost = field(j, "total_cost").get<std::int64_t>();
    r.master_seed = field(j, "master_seed").get<std::uint64_t>();
    r.lane_index = field(j, "lane_index").get<std::uint64_t>();
    return r;
}

Json to_json(const ExperimentConfig& c) {
    Json j{{"mode", mode_name(c.mode)},
           {"delta", c.delta},
           {"replications", c.replications},
           {"master_seed", c.master_seed}};
    if (c.dist) {
        j["dist"] = to_json(*c.dist);
    }
    if (c.alternative) {
        j["alternative"] = to_json(*c.alternative);
    }
    if (c.cone) {
        j["cone"] = to_json(*c.cone);
    }
    put_optional(j, "epsilon", c.epsilon);
    put_optional(j, "a", c.heavy_a);
    return j;
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error("experiment config must be a JSON object");
    }
    static const std::vector<std::string> known{"mode",    "dist",         "alternative",
                                                "cone",    "epsilon",      "delta",
                                                "replications", "master_seed", "a"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error("unknown config field '" + key + "'");
        }
    }
    ExperimentConfig c;
    c.mode = j.contains("mode") ? mode_from_name(j.at("mode").get<std::string>())
                                : ExperimentMode::kCoverage;
    if (j.contains("dist")) {
        c.dist = distribution_from_json(j.at("dist"));
    }
    if (j.contains("alternative")) {
        c.alternative = distribution_from_json(j.at("alternative"));
    }
    if (j.contains("cone")) {
        c.cone = cone_from_json(j.at("cone"));
    }
    c.epsilon = optional_real(j, "epsilon");
    c.heavy_a = optional_real(j, "a");
    c.delta = real_field(j, "delta");
    c.replications = field(j, "replications").get<std::int64_t>();
    if (j.contains("master_seed")) {
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
    }
    c.validate();
    return c;
}

Json to_json(const ExperimentReport& r) {
    Json theoretical = Json::object();
    put_optional(theoretical, "expected_cost_bound", r.theoretical.expected_cost_bound);
    put_optional(theoretical, "fixed_cost_lb", r.theoretical.fixed_cost_lb);
    put_optional(theoretical, "worst_case_lb", r.theoretical.worst_case_lb);
    put_optional(theoretical, "wald_lb", r.theoretical.wald_lb);
    Json j{
        {"config", to_json(r.config)},
        {"master_seed", r.config.master_seed},
        {"failure_count", r.failure_count},
        {"coverage", r.coverage},
        {"mean_cost", r.mean_cost},
        {"cost_quantiles",
         {{"p50", r.cost_quantiles.p50}, {"p90", r.cost_quantiles.p90}, {"p99", r.cost_quantiles.p99}}},
        {"theoretical", theoretical},
        {"wall_time_seconds", r.wall_time_seconds},
    };
    put_optional(j, "r_hat_mean", r.r_hat_mean);
    put_optional(j, "true_mean", r.true_mean);
    put_optional(j, "rho1", r.rho1);
    if (r.plan) {
        j["plan"] = to_json(*r.plan);
    }
    if (r.sprt) {
        j["sprt"] = Json{{"h1", to_json(r.sprt->h1)}, {"h2", to_json(r.sprt->h2)}};
    }
    return j;
}

ExperimentReport report_from_json(const Json& j) {
    ExperimentReport r;
    r.config = config_from_json(field(j, "config"));
    r.failure_count = field(j, "failure_count").get<std::int64_t>();
    r.coverage = real_field(j, "coverage");
    r.mean_cost = real_field(j, "mean_cost");
    const Json& q = field(j, "cost_quantiles");
    r.cost_quantiles = {real_field(q, "p50"), real_field(q, "p90"), real_field(q, "p99")};
    const Json& t = field(j, "theoretical");
    r.theoretical.expected_cost_bound = optional_real(t, "expected_cost_bound");
    r.theoretical.fixed_cost_lb = optional_real(t, "fixed_cost_lb");
    r.theoretical.worst_case_lb = optional_real(t, "worst_case_lb");
    r.theoretical.wald_lb = optional_real(t, "wald_lb");
    r.wall_time_seconds = real_field(j, "wall_time_seconds");
    r.r_hat_mean = optional_real(j, "r_hat_mean");
    r.true_mean = optional_real(j, "true_mean");
    r.rho1 = optional_real(j, "rho1");
    if (j.contains("plan")) {
        r.plan = plan_from_json(j.at("plan"));
    }
    if (j.contains("sprt")) {
        r.sprt = SprtSummary{sprt_stats_from_json(field(j.at("sprt"), "h1")),
                             sprt_stats_from_json(field(j.at("sprt"), "h2"))};
    }
    return r;
}

Json to_json(const AdversaryPair& pair) {
    return Json{{"d1", to_json(pair.d1)},
                {"d2", to_json(pair.d2)},
                {"mean_gap", pair.mean_gap},
                {"validity",
                 {{"witnesses", pair.validity.witnesses},
                  {"K", pair.validity.K},
                  {"radius", pair.validity.radius},
                  {"epsilon_limit", pair.validity.epsilon_limit}}}};
}

void write_replications_csv(std::ostream& out, const std::vector<ReplicationRow>& rows) {
    const auto old_precision = out.precision(17);
    out << "lane,estimate,error,n1,m_prime,n2,total_cost\n";
    for (const auto& row : rows) {
        out << row.lane << ',' << row.estimate << ',' << row.error << ',' << row.n1 << ','
            << row.m_prime << ',' << row.n2 << ',' << row.total_cost << '\n';
    }
    out.precision(old_precision);
}

}  // namespace gmc
