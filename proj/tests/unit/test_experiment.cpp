#include <doctest.h>

#include <cmath>

#include "pdlab/experiment.hpp"

using namespace pdlab;

namespace {

std::string field_of(const Json& doc) {
    try {
        parse_config(doc);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

Json without_run(const ExperimentReport& r) { return r.payload; }

}  // namespace

TEST_CASE("spec JSON round trip") {
    for (const auto& s : {SequenceSpec::uniform(), SequenceSpec::thue_morse(), SequenceSpec::shifted_primes(-3),
                          SequenceSpec::polynomial({1, 0, 1}), SequenceSpec::polynomial({-1, -1, 1})})
        CHECK(spec_from_json(spec_to_json(s)) == s);
    CHECK(spec_to_json(SequenceSpec::polynomial({1, 0, 1})).dump() == R"({"coeffs":[1,0,1],"kind":"poly"})");
    CHECK(spec_from_json("uniform") == SequenceSpec::uniform());
    CHECK_THROWS_AS(spec_from_json(Json{{"kind", "poly"}, {"coeffs", {-1, 0, 1}}}), ValidationError);
    CHECK_THROWS_AS(spec_from_json(Json{{"kind", "uniform"}, {"shift", 2}}), ValidationError);
    CHECK_THROWS_AS(spec_from_json(Json{{"kind", "cubes"}}), ValidationError);
}

TEST_CASE("validation names the offending field") {
    CHECK(field_of(Json{{"experiment", "tail"}, {"spec", "uniform"}, {"eps", 0.1}}) == "x");
    CHECK(field_of(Json{{"experiment", "tail"}, {"spec", "uniform"}, {"x", 1000}, {"eps", 0.7}}) == "eps");
    CHECK(field_of(Json{{"experiment", "tail"}, {"spec", "uniform"}, {"x", 1000}, {"eps", 0.1}, {"c", 0.5}}) == "c");
    CHECK(field_of(Json{{"experiment", "lod"}, {"spec", "uniform"}, {"x", 1000}, {"c", 1.0}}) == "c");
    CHECK(field_of(Json{{"experiment", "lod"}, {"spec", "uniform"}, {"x", 10.5}, {"c", 0.5}}) == "x");
    CHECK(field_of(Json{{"experiment", "sieve-survivors"}, {"spec", "uniform"}, {"x", 1000}, {"eps", 0.3},
                        {"delta0", 0.2}}) == "delta0");
    CHECK(field_of(Json{{"experiment", "pd-corr"}, {"boxes", Json::array()}}) == "boxes");
    CHECK(field_of(Json{{"experiment", "joint-cdf"}, {"thresholds", {0.5, 1.5}}}) == "thresholds");
    CHECK(field_of(Json{{"experiment", "joint-cdf"}, {"thresholds", 0.5}, {"x", 100}}) == "x");
    CHECK(field_of(Json{{"experiment", "nope"}}) == "experiment");
    CHECK(field_of(Json::object()) == "experiment");
    CHECK(field_of(Json{{"experiment", "rho-table"}, {"format", "xml"}}) == "format");
    CHECK(field_of(Json{{"experiment", "tail"}, {"spec", {{"kind", "poly"}, {"coeffs", {0, 0, 1}}}}, {"x", 100},
                        {"eps", 0.1}}) == "spec.coeffs");
}

TEST_CASE("rho table") {
    const auto r = run(parse_config(Json{{"experiment", "rho-table"}, {"u_max", 5}}));
    REQUIRE(r.table.columns == std::vector<std::string>{"u", "rho"});
    bool saw1 = false, saw2 = false;
    for (const auto& row : r.table.rows) {
        if (row[0] == 1.0) {
            saw1 = true;
            CHECK(row[1] == 1.0);
        }
        if (row[0] == 2.0) {
            saw2 = true;
            CHECK(row[1] == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
        }
    }
    CHECK(saw1);
    CHECK(saw2);
    CHECK(r.to_csv().rfind("u,rho\n", 0) == 0);
}

TEST_CASE("reports embed a config that reproduces them") {
    const Json doc{{"experiment", "tail"}, {"spec", "uniform"}, {"x", 100000}, {"eps", 0.1}, {"seed", 42},
                   {"guard_band", 5}};
    const auto r = run(parse_config(doc));
    const Json& p = r.payload;
    CHECK(p["schema_version"] == kReportSchemaVersion);
    CHECK(p["experiment"] == "tail");
    CHECK(p["spec"] == Json{{"kind", "uniform"}});
    CHECK(p["x"] == 100000);
    CHECK(p["seed"] == 42);
    CHECK(p["guard_band"] == 5.0);
    CHECK(p["oracle_value"].get<double>() == doctest::Approx(std::log(10.0 / 9.0)));
    CHECK(p["exhaustive"] == true);
    CHECK(p["details"]["within_guard_band"] == true);
    const auto again = run(parse_config(p["config"]));
    CHECK(again.payload.dump() == p.dump());
    const Json full = r.to_json();
    CHECK(full["run"].contains("wall_time"));
    CHECK(full["run"]["threads"] == 1);
}

TEST_CASE("payload is independent of the thread count") {
    for (Json doc : {Json{{"experiment", "seq-corr"}, {"spec", "uniform"}, {"x", 200000},
                          {"boxes", Json::parse(R"([{"lo":[0.1,0.2],"hi":[0.3,0.5]}])")}},
                     Json{{"experiment", "pd-corr"}, {"n_samples", 20000}, {"seed", 3},
                          {"boxes", Json::parse(R"([{"lo":[0.2],"hi":[0.6]}])")}},
                     Json{{"experiment", "tail"}, {"spec", "thue_morse"}, {"x", 300000}, {"eps", 0.2},
                          {"rate", 0.3}, {"seed", 9}},
                     Json{{"experiment", "lod"}, {"spec", {{"kind", "shifted_primes"}, {"shift", 1}}},
                          {"x", 100000}, {"c", 0.4}}}) {
        doc["threads"] = 1;
        const auto a = run(parse_config(doc));
        doc["threads"] = 8;
        const auto b = run(parse_config(doc));
        CHECK(without_run(a).dump() == without_run(b).dump());
        CHECK(b.to_json()["run"]["threads"] == 8);
    }
}

TEST_CASE("sampling experiments report subsampling") {
    const auto r = run(parse_config(Json{{"experiment", "joint-cdf"}, {"spec", "uniform"}, {"x", 100000},
                                         {"thresholds", 0.5}, {"rate", 0.25}, {"seed", 1}}));
    CHECK(r.payload["exhaustive"] == false);
    CHECK(r.payload["details"]["rate"] == 0.25);
    CHECK(r.payload["oracle_value"].get<double>() == doctest::Approx(1.0 - std::log(2.0)));
}

TEST_CASE("pd-corr falls back to quadrature off the product formula") {
    const auto r = run(parse_config(Json{{"experiment", "pd-corr"}, {"n_samples", 20000},
                                         {"boxes", Json::parse(R"([{"lo":[0.4,0.5],"hi":[0.6,0.7]}])")}}));
    REQUIRE(r.payload["flags"].size() == 1);
    CHECK(r.payload["flags"][0] == "product_formula_not_applicable");
    CHECK(r.payload["oracle_value"].is_number());
}

TEST_CASE("sweep") {
    const Json tmpl{{"experiment", "tail"}, {"spec", "uniform"}, {"x", 100000}};
    const auto s = sweep(tmpl, "eps", Json{0.05, 0.1, 0.2});
    REQUIRE(s.reports.size() == 3);
    REQUIRE(s.trend.rows.size() == 3);
    CHECK(s.trend.columns.front() == "eps");
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.trend.rows[i][1] == s.reports[i].payload["estimate"].get<double>());
        CHECK(s.reports[i].payload["config"]["eps"] == s.trend.rows[i][0]);
    }
    CHECK_THROWS_AS(sweep(tmpl, "eps", Json::array()), ValidationError);
    CHECK_THROWS_AS(sweep(tmpl, "eps", Json{0.1, 0.9}), ValidationError);
    CHECK_THROWS_AS(sweep(tmpl, "spec", Json{1}), ValidationError);
}

TEST_CASE("csv escaping and single-row reports") {
    const auto r = run(parse_config(Json{{"experiment", "lod"}, {"spec", "uniform"}, {"x", 1000}, {"c", 0.5}}));
    const auto csv = r.to_csv();
    CHECK(csv.rfind("experiment,spec,x,estimate,std_error,oracle_value,guard_band,exhaustive,seed\n", 0) == 0);
    CHECK(csv.find("lod,\"{\"\"kind\"\":\"\"uniform\"\"}\",1000,") != std::string::npos);
}
