#include "gmc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gmc/bounds.hpp"
#include "gmc/distribution.hpp"
#include "gmc/harness.hpp"
#include "gmc/report_io.hpp"
#include "gmc/tuner.hpp"
#include "gmc/two_stage.hpp"

namespace gmc::cli {

namespace {

// Below this K the q-norm lower bound constant is tiny and the bound says little.
constexpr double kSmallK = 2.0;

struct SubcommandInfo {
    const char* name;
    Subcommand id;
    const char* description;
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

const std::vector<SubcommandInfo>& subcommands() {
    static const std::vector<SubcommandInfo> table{
        {"estimate", Subcommand::kEstimate, "Estimate the mean of a distribution literal",
         {"dist", "p", "q", "K", "eps", "delta"},
         {"seed", "lane", "variant", "out"}},
        {"integrate", Subcommand::kIntegrate,
         "Estimate the integral of a built-in integrand over [0,1] under uniform sampling",
         {"f", "p", "q", "K", "eps", "delta"},
         {"seed", "lane", "out"}},
        {"params", Subcommand::kParams, "Print the stage plan and its expected cost bound",
         {"p", "q", "K", "eps", "delta"},
         {"rho", "variant", "alpha", "gamma", "out"}},
        {"bounds", Subcommand::kBounds, "Print the applicable cost lower bounds",
         {"p", "q", "K", "delta"},
         {"eps", "sigma", "tau", "out"}},
        {"experiment", Subcommand::kExperiment, "Run a seeded experiment from a JSON config",
         {"config"},
         {"seed", "reps", "out", "format"}},
        {"adversary", Subcommand::kAdversary, "Print an adversary pair or heavy-tailed law",
         {"type"},
         {"sigma", "tau", "alpha", "eps", "p", "q", "K", "a", "scale", "delta", "out"}},
    };
    return table;
}

const char* flag_help(const std::string& name) {
    static const std::map<std::string, const char*> help{
        {"p", "lower moment order p >= 1"},
        {"q", "upper moment order q > p, or inf"},
        {"K", "cone constant K > 1"},
        {"eps", "absolute error tolerance"},
        {"delta", "failure probability"},
        {"seed", "master seed (default 0)"},
        {"lane", "stream lane (default 0)"},
        {"reps", "replications, overrides the config"},
        {"config", "experiment config file"},
        {"out", "write output to this path instead of stdout"},
        {"format", "json or csv"},
        {"dist", "distribution literal, e.g. {\"kind\":\"normal\",\"mu\":0,\"sigma\":1}"},
        {"f", "integrand: identity, center, square, sqrt, quarter_indicator"},
        {"rho", "first central norm at which to evaluate the cost bound (default 1)"},
        {"variant", "plan: default, moment or variance"},
        {"alpha", "per-block failure probability (params) or bias of the variance pair"},
        {"gamma", "relative accuracy of the stage-one moment"},
        {"sigma", "radius of the centered L2 ball"},
        {"tau", "radius of the centered Lq ball"},
        {"type", "variance, qnorm or heavy"},
        {"a", "weight of the far atom of the heavy law"},
        {"scale", "mean of the heavy law (default 1)"},
    };
    return help.at(name);
}

const std::vector<std::string> kRealFlags{"p",   "q",     "K",   "eps",   "delta", "rho",
                                          "gamma", "sigma", "tau", "a",   "scale"};
const std::vector<std::string> kCountFlags{"seed", "lane", "reps"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::uint64_t parse_count(const std::string& name, const std::string& text) {
    const bool digits = !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
        return c >= '0' && c <= '9';
    });
    if (!digits) {
        throw UsageError("--" + name + " expects a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw UsageError("--" + name + " is out of range: '" + text + "'");
    }
}

double parse_flag_real(const std::string& name, const std::string& text) {
    try {
        return parse_real(text);
    } catch (const Error&) {
        throw UsageError("--" + name + " expects a number, got '" + text + "'");
    }
}

void require_flags(const CliInvocation& inv, const std::vector<std::string>& names,
                   const std::string& context) {
    for (const auto& name : names) {
        if (!inv.flags.count(name)) {
            throw UsageError(context + " requires --" + name);
        }
    }
}

// Value checks that belong to parsing: number syntax, the cone, enumerations.
void validate(const CliInvocation& inv) {
    for (const auto& [name, value] : inv.flags) {
        if (contains(kRealFlags, name)) {
            parse_flag_real(name, value);
        } else if (contains(kCountFlags, name)) {
            parse_count(name, value);
        }
    }
    const auto& f = inv.flags;
    if (f.count("alpha")) {
        const std::string& text = f.at("alpha");
        try {
            if (text.find('/') != std::string::npos) {
                parse_rational(text);
            } else {
                parse_real(text);
            }
        } catch (const Error&) {
            throw UsageError("--alpha expects a number or a fraction, got '" + text + "'");
        }
    }
    if (f.count("p") && f.count("q") && f.count("K")) {
        try {
            ConeSpec::make(parse_real(f.at("p")), parse_real(f.at("q")), parse_real(f.at("K")));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    } else if (f.count("K") && parse_real(f.at("K")) <= 1.0) {
        throw UsageError("K must exceed 1");
    }
    if (f.count("variant")) {
        const std::string& v = f.at("variant");
        if (v != "default" && v != "moment" && v != "variance") {
            throw UsageError("--variant must be default, moment or variance");
        }
    }
    if (f.count("format") && f.at("format") != "json" && f.at("format") != "csv") {
        throw UsageError("--format must be json or csv");
    }
    if (f.count("dist")) {
        try {
            distribution_from_json(Json::parse(f.at("dist")));
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad --dist literal: ") + e.what());
        }
    }
    if (f.count("f")) {
        static const std::vector<std::string> names{"identity", "center", "square", "sqrt",
                                                    "quarter_indicator"};
        if (!contains(names, f.at("f"))) {
            throw UsageError("unknown integrand '" + f.at("f") + "'");
        }
    }
    if (inv.subcommand == Subcommand::kBounds && (f.count("sigma") || f.count("tau"))) {
        require_flags(inv, {"eps"}, "bounds with --sigma or --tau");
    }
    if (inv.subcommand == Subcommand::kAdversary) {
        require_flags(inv, {"type"}, "adversary");
        const std::string& type = f.at("type");
        if (type == "variance") {
            require_flags(inv, {"alpha", "K"}, "adversary --type variance");
        } else if (type == "qnorm") {
            require_flags(inv, {"tau", "eps", "p", "q", "K"}, "adversary --type qnorm");
        } else if (type == "heavy") {
            require_flags(inv, {"a"}, "adversary --type heavy");
        } else {
            throw UsageError("--type must be variance, qnorm or heavy");
        }
    }
}

struct App {
    CLI::App app{"Moment-adapted two-stage Monte Carlo mean estimation", "gmc"};
    std::map<CLI::App*, Subcommand> ids;
    std::map<CLI::App*, std::map<std::string, std::pair<CLI::Option*, std::string>>> options;

    App() {
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all", "Show help for every subcommand");
        for (const auto& info : subcommands()) {
            CLI::App* sub = app.add_subcommand(info.name, info.description);
            ids[sub] = info.id;
            auto& slots = options[sub];
            auto add = [&](const std::string& name, bool required) {
                auto& slot = slots[name];
                slot.first = sub->add_option("--" + name, slot.second, flag_help(name));
                if (required) {
                    slot.first->required();
                }
            };
            for (const auto& name : info.required) {
                add(name, true);
            }
            for (const auto& name : info.optional) {
                add(name, false);
            }
        }
    }

    // CLI11 consumes the argument vector back to front.
    void parse(const std::vector<std::string>& args) {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }

    CliInvocation invocation() {
        CliInvocation inv;
        for (auto& [sub, id] : ids) {
            if (!sub->parsed()) {
                continue;
            }
            inv.subcommand = id;
            for (auto& [name, slot] : options[sub]) {
                if (slot.first->count() > 0) {
                    inv.flags[name] = slot.second;
                }
            }
        }
        if (inv.flags.count("config")) {
            inv.config_path = inv.flags.at("config");
        }
        return inv;
    }
};

// --- dispatch helpers ---

double real(const CliInvocation& inv, const std::string& name) {
    return parse_real(inv.flags.at(name));
}

double real_or(const CliInvocation& inv, const std::string& name, double fallback) {
    return inv.flags.count(name) ? real(inv, name) : fallback;
}

std::uint64_t count_or(const CliInvocation& inv, const std::string& name, std::uint64_t fallback) {
    return inv.flags.count(name) ? parse_count(name, inv.flags.at(name)) : fallback;
}

ConeSpec cone(const CliInvocation& inv) {
    return ConeSpec::make(real(inv, "p"), real(inv, "q"), real(inv, "K"));
}

StagePlan plan_for(const CliInvocation& inv) {
    const ConeSpec c = cone(inv);
    const Accuracy acc = Accuracy::make(real(inv, "eps"), real(inv, "delta"));
    const std::string variant = inv.flags.count("variant") ? inv.flags.at("variant") : "default";
    if (variant == "moment") {
        return plan_moment_variant(c, acc);
    }
    if (variant == "variance") {
        return plan_variance_variant(c, acc);
    }
    TuningOptions options;
    options.alpha = real_or(inv, "alpha", options.alpha);
    options.gamma = real_or(inv, "gamma", options.gamma);
    return plan_default(c, acc, options);
}

struct Integrand {
    double (*f)(double);
    double mean;
};

Integrand integrand(const std::string& name) {
    if (name == "identity") {
        return {[](double x) { return x; }, 0.5};
    }
    if (name == "center") {
        return {[](double x) { return x - 0.5; }, 0.0};
    }
    if (name == "square") {
        return {[](double x) { return x * x; }, 1.0 / 3.0};
    }
    if (name == "sqrt") {
        return {[](double x) { return std::sqrt(x); }, 2.0 / 3.0};
    }
    return {[](double x) { return x < 0.25 ? 1.0 : 0.0; }, 0.25};
}

Json run_json(const RunRecord& record, const StagePlan& plan) {
    Json j = to_json(record);
    j["plan"] = to_json(plan);
    return j;
}

Json do_estimate(const CliInvocation& inv) {
    const Distribution dist = distribution_from_json(Json::parse(inv.flags.at("dist")));
    const StagePlan plan = plan_for(inv);
    Stream stream = derive_stream(count_or(inv, "seed", 0), count_or(inv, "lane", 0));
    const Sampler sampler = [&dist](Stream& s) { return sample(dist, s); };
    Json j = run_json(run(plan, sampler, stream), plan);
    j["in_cone"] = in_cone(dist, cone(inv));
    try {
        j["true_mean"] = mean(dist);
    } catch (const MomentError&) {
        // heavy tails: the estimate is still reported, the mean is not
    }
    return j;
}

Json do_integrate(const CliInvocation& inv) {
    const Integrand g = integrand(inv.flags.at("f"));
    const std::function<double(const double&)> f = [&g](const double& x) { return g.f(x); };
    const std::function<double(Stream&)> points = [](Stream& s) { return s.next_uniform(); };
    const RunRecord record = integrate<double>(f, points, cone(inv), real(inv, "eps"),
                                               real(inv, "delta"), count_or(inv, "seed", 0),
                                               count_or(inv, "lane", 0));
    Json j = run_json(record, plan_default(cone(inv), Accuracy::make(real(inv, "eps"),
                                                                     real(inv, "delta"))));
    j["true_mean"] = g.mean;
    return j;
}

Json do_params(const CliInvocation& inv) {
    const StagePlan plan = plan_for(inv);
    Json j = to_json(plan);
    const ConeSpec c = cone(inv);
    j["p"] = c.p();
    j["q"] = to_json(c).at("q");
    j["K"] = c.K();
    j["epsilon"] = real(inv, "eps");
    j["delta"] = real(inv, "delta");
    if (plan.alpha == TuningOptions{}.alpha) {
        const double rho = real_or(inv, "rho", 1.0);
        j["rho"] = rho;
        j["expected_cost_bound"] = expected_cost_bound(plan, rho);
    }
    return j;
}

Json do_bounds(const CliInvocation& inv, std::ostream& err) {
    const ConeSpec c = cone(inv);
    const double delta = real(inv, "delta");
    Json j;
    j["p"] = c.p();
    j["q"] = to_json(c).at("q");
    j["K"] = c.K();
    j["delta"] = delta;
    j["fixed_cost_lb"] = fixed_cost_lb(c, delta);
    if (inv.flags.count("eps")) {
        j["epsilon"] = real(inv, "eps");
    }
    if (inv.flags.count("sigma")) {
        j["sigma"] = real(inv, "sigma");
        j["wor_lb_variance"] = wor_lb_variance(real(inv, "sigma"), real(inv, "eps"), delta, c.K());
    }
    if (inv.flags.count("tau")) {
        j["tau"] = real(inv, "tau");
        j["wor_lb_qnorm"] =
            wor_lb_qnorm(real(inv, "tau"), real(inv, "eps"), delta, c.p(), c.q(), c.K());
    }
    if (c.q() <= 2.0) {
        j["qnorm_constant"] = qnorm_constant(c.q(), c.K());
    }
    Json warnings = Json::array();
    if (c.K() < kSmallK) {
        std::ostringstream msg;
        msg << "K = " << c.K()
            << " is small: worst-case lower bound constants vanish as K -> 1 and understate the "
               "true cost";
        warnings.push_back(msg.str());
        err << "warning: " << msg.str() << '\n';
    }
    j["warnings"] = warnings;
    return j;
}

ExperimentConfig load_config(const CliInvocation& inv) {
    const std::string& path = *inv.config_path;
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    ExperimentConfig config;
    try {
        config = config_from_json(Json::parse(in));
    } catch (const std::exception& e) {
        throw UsageError("bad config '" + path + "': " + e.what());
    }
    if (inv.flags.count("seed")) {
        config.master_seed = count_or(inv, "seed", 0);
    }
    if (inv.flags.count("reps")) {
        config.replications = static_cast<std::int64_t>(count_or(inv, "reps", 1));
        try {
            config.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    return config;
}

Json do_adversary(const CliInvocation& inv) {
    const std::string& type = inv.flags.at("type");
    if (type == "heavy") {
        const double a = real(inv, "a");
        const double scale = real_or(inv, "scale", 1.0);
        const Distribution dist = adversary_heavy(a, scale);
        Json j{{"dist", to_json(dist)}, {"mean", mean(dist)}, {"a", a}, {"scale", scale}};
        if (inv.flags.count("p") && inv.flags.count("q") && inv.flags.count("K")) {
            const ConeSpec c = cone(inv);
            j["kappa"] = kappa(dist, c.p(), c.q());
            j["in_cone"] = in_cone(dist, c);
        }
        return j;
    }
    AdversaryPair pair = [&] {
        if (type == "variance") {
            const double sigma = real_or(inv, "sigma", 1.0);
            const std::string& alpha = inv.flags.at("alpha");
            if (alpha.find('/') != std::string::npos) {
                return adversary_variance_pair(sigma, parse_rational(alpha), real(inv, "K"));
            }
            return adversary_variance_pair(sigma, parse_real(alpha), real(inv, "K"));
        }
        return adversary_qnorm_pair(real(inv, "tau"), real(inv, "eps"), real(inv, "p"),
                                    real(inv, "q"), real(inv, "K"));
    }();
    Json j = to_json(pair);
    j["log_ratio_drift"] = log_ratio_drift(pair);
    if (inv.flags.count("delta")) {
        j["wald_lb"] = wald_lb(pair, real(inv, "delta"));
    }
    return j;
}

void emit(const CliInvocation& inv, const std::string& text, std::ostream& out) {
    if (inv.flags.count("out")) {
        std::ofstream file(inv.flags.at("out"));
        if (!file) {
            throw Error("cannot write '" + inv.flags.at("out") + "'");
        }
        file << text;
        return;
    }
    out << text;
}

}  // namespace

CliInvocation parse(const std::vector<std::string>& args) {
    App app;
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    CliInvocation inv = app.invocation();
    validate(inv);
    return inv;
}

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    try {
        validate(inv);
        std::string text;
        switch (inv.subcommand) {
        case Subcommand::kEstimate:
            text = do_estimate(inv).dump() + "\n";
            break;
        case Subcommand::kIntegrate:
            text = do_integrate(inv).dump() + "\n";
            break;
        case Subcommand::kParams:
            text = do_params(inv).dump() + "\n";
            break;
        case Subcommand::kBounds:
            text = do_bounds(inv, err).dump() + "\n";
            break;
        case Subcommand::kAdversary:
            text = do_adversary(inv).dump() + "\n";
            break;
        case Subcommand::kExperiment: {
            if (!inv.config_path) {
                throw UsageError("experiment requires --config");
            }
            const ExperimentReport report = run_experiment(load_config(inv));
            if (inv.flags.count("format") && inv.flags.at("format") == "csv") {
                std::ostringstream csv;
                write_replications_csv(csv, report.rows);
                text = csv.str();
            } else {
                text = to_json(report).dump() + "\n";
            }
            break;
        }
        }
        emit(inv, text, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    err << "wall_time_seconds: " << std::fixed << std::setprecision(6) << elapsed.count() << '\n';
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    App app;
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.app.help();
        return 2;
    }
    CliInvocation inv;
    try {
        inv = app.invocation();
        validate(inv);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    return dispatch(inv, out, err);
}

}  // namespace gmc::cli
