#include <doctest.h>

#include <sstream>

#include "gmc/error.hpp"
#include "gmc/report_io.hpp"
#include "gmc/tuner.hpp"
#include "gmc/two_stage.hpp"

using namespace gmc;

TEST_CASE("numbers") {
    CHECK(parse_real("inf") == kInf);
    CHECK(parse_real("0.25") == 0.25);
    CHECK_THROWS(parse_real("0.25x"));
    CHECK_THROWS(parse_real(""));
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("2") == Rational(2));
    CHECK_THROWS(parse_rational("3/0"));
    CHECK_THROWS(parse_rational("a/4"));
    CHECK(real_from_json(Json("inf")) == kInf);
    CHECK(real_from_json(Json(1.5)) == 1.5);
}

TEST_CASE("distribution literals") {
    const auto plain = distribution_from_json(Json::parse(R"({"kind":"discrete","atoms":[[0,0.75],[1,0.25]]})"));
    CHECK(mean(plain) == 0.25);
    CHECK_FALSE(plain.as_discrete()->exact.has_value());

    const auto exact = distribution_from_json(Json::parse(R"({"kind":"discrete","atoms":[[0,"3/4"],[1,"1/4"]]})"));
    REQUIRE(exact.as_discrete()->exact.has_value());
    CHECK((*exact.as_discrete()->exact)[1] == Rational(1, 4));

    const auto normal = distribution_from_json(Json::parse(R"({"kind":"normal","mu":0,"sigma":1})"));
    CHECK(normal.kind_name() == "normal");
    CHECK_THROWS(distribution_from_json(Json::parse(R"({"kind":"cauchy"})")));
    CHECK_THROWS(distribution_from_json(Json::parse(R"({"kind":"normal","mu":0})")));
    CHECK_THROWS(distribution_from_json(Json::parse(R"({"kind":"discrete","atoms":[[0,0.5]]})")));

    for (const auto& d : {plain, exact, normal, Distribution::exponential(2), Distribution::lognormal(0.1, 0.3),
                          Distribution::pareto(1, 3), Distribution::uniform(-1, 2)}) {
        const Json j = to_json(d);
        CHECK(to_json(distribution_from_json(j)) == j);
    }
}

TEST_CASE("cone serializes infinity as a string") {
    const Json j = to_json(ConeSpec::make(2, kInf, 3));
    CHECK(j.at("q") == "inf");
    CHECK(j.dump() == R"({"K":3.0,"p":2.0,"q":"inf"})");
    CHECK(cone_from_json(j).q() == kInf);
    CHECK_THROWS(cone_from_json(Json::parse(R"({"p":1,"q":2,"K":0.5})")));
}

TEST_CASE("plan and run record round trip") {
    const auto plan = plan_default(ConeSpec::make(1, 1.5, 2), Accuracy::make(0.3, 0.1));
    CHECK(plan_from_json(Json::parse(to_json(plan).dump())) == plan);
    const auto variance = plan_variance_variant(ConeSpec::make(2, 3, 2), Accuracy::make(0.3, 0.1));
    CHECK(plan_from_json(Json::parse(to_json(variance).dump())) == variance);

    const auto record = estimate_mean(Distribution::normal(0.1, 0.7), ConeSpec::make(1, 2, 2), 0.2, 0.1, 5, 3);
    CHECK(run_record_from_json(Json::parse(to_json(record).dump())) == record);
    const std::string text = to_json(plan).dump();
    CHECK(text.find("\"k\":") != std::string::npos);
    CHECK(text.find("\"alpha\"") < text.find("\"eta\""));
}

TEST_CASE("config and report round trip") {
    const Json cfg = Json::parse(R"({
        "mode": "coverage",
        "dist": {"kind": "discrete", "atoms": [[0, "1/2"], [2, "1/2"]]},
        "cone": {"p": 1, "q": 2, "K": 2},
        "epsilon": 0.2, "delta": 0.1, "replications": 25, "master_seed": 42})");
    const ExperimentConfig config = config_from_json(cfg);
    CHECK(config.replications == 25);
    CHECK(config.master_seed == 42);
    CHECK(to_json(config_from_json(to_json(config))) == to_json(config));

    const ExperimentReport report = run_experiment(config);
    const Json j = to_json(report);
    const ExperimentReport back = report_from_json(Json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.mean_cost == report.mean_cost);
    CHECK(back.plan == report.plan);
    CHECK(j.contains("wall_time_seconds"));
    CHECK(j.at("master_seed") == 42);

    const auto pair = adversary_variance_pair(1.0, Rational(1, 2), 3.0);
    Json sprt_cfg = Json::parse(R"({"mode":"sprt","delta":0.1,"replications":50,"master_seed":1})");
    sprt_cfg["dist"] = to_json(pair.d1);
    sprt_cfg["alternative"] = to_json(pair.d2);
    const ExperimentReport sprt = run_experiment(config_from_json(sprt_cfg));
    const Json sj = to_json(sprt);
    CHECK(to_json(report_from_json(Json::parse(sj.dump()))) == sj);

    CHECK_THROWS_WITH(config_from_json(Json::parse(R"({"mode":"coverage","delta":0.1,"replications":1,"bogus":1})")),
                      "unknown config field 'bogus'");
    CHECK_THROWS(config_from_json(Json::parse(R"({"mode":"walk","delta":0.1,"replications":1})")));
    CHECK_THROWS(config_from_json(Json::parse(R"({"mode":"coverage","delta":0.1,"replications":0,
        "dist":{"kind":"normal","mu":0,"sigma":1},"cone":{"p":1,"q":2,"K":2},"epsilon":0.1})")));
}

TEST_CASE("doubles survive serialization bit for bit") {
    for (double x : {0.1, 1.0 / 3.0, 6399.999999999999, 1e-300, 123456789.123456789, 2.0}) {
        const Json j = x;
        CHECK(Json::parse(j.dump()).get<double>() == x);
    }
    CHECK(Json(2.0).dump() == "2.0");
    CHECK(Json(6400.0).dump() == "6400.0");
}

TEST_CASE("replication csv") {
    std::ostringstream out;
    write_replications_csv(out, {{0, 0.25, 0.0, 10, 2, 6, 16}, {1, 0.1, 0.15, 10, 1, 3, 13}});
    CHECK(out.str() ==
          "lane,estimate,error,n1,m_prime,n2,total_cost\n"
          "0,0.25,0,10,2,6,16\n"
          "1,0.10000000000000001,0.14999999999999999,10,1,3,13\n");
}
