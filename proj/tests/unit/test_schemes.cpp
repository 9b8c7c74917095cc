#include "doctest.h"

#include "retroalign/dof/dof.hpp"
#include "retroalign/schemes/engine.hpp"
#include "retroalign/sim/trace.hpp"

#include <sstream>

using namespace retroalign;
using namespace retroalign::schemes;

namespace {

struct Golden {
    ModelId model;
    int K, M;
    long long symbols, slots;
};

// Worked totals, or the planner's totals where only the rate is stated.
const std::vector<Golden> kGolden = {
    {kICFD, 3, 3, 6, 5},     {kICFD, 4, 4, 24, 19},   {kICFD, 5, 5, 720, 561}, {kICFD, 6, 6, 720, 554},
    {kICOF, 3, 3, 6, 5},     {kICOF, 4, 4, 24, 19},   {kICOF, 5, 5, 720, 561}, {kICOF, 6, 6, 180, 134},
    {kICSF, 3, 3, 6, 5},     {kICSF, 4, 4, 24, 19},   {kICSF, 5, 5, 180, 137}, {kXOF, 2, 2, 4, 3},
    {kXOF, 3, 3, 9, 6},      {kXOF, 5, 5, 25, 15},    {kXFD, 2, 2, 4, 3},      {kXFD, 3, 3, 72, 51},
    {kXSF, 2, 2, 8, 6},      {kXSF, 3, 3, 27, 17},    {kXSF, 4, 4, 128, 75},
};

std::string tag(const Golden& g) { return g.model.tag() + " K=" + std::to_string(g.K) + " M=" + std::to_string(g.M); }

} // namespace

TEST_CASE("built-in schemes reach the analytic DoF") {
    for (const auto& g : kGolden) {
        CAPTURE(tag(g));
        const Policy p = build_policy(g.model, g.K, g.M);
        CHECK(p.total_fresh() == g.symbols);
        CHECK(p.total_slots() == g.slots);
        const auto r = execute<PrimeField>(p, {3, true, nullptr});
        CHECK(r.report.symbols_injected == g.symbols);
        CHECK(r.report.slots_used == g.slots);
        CHECK(r.report.all_decodable());
        CHECK(r.report.feasibility_violations.empty());
        REQUIRE(r.report.empirical_dof);
        CHECK(*r.report.empirical_dof == dof::analytic(g.model, g.K, g.M).value);
        CHECK(r.ledgers_match());
        for (const auto& rx : r.state.rx) CHECK(static_cast<long long>(rx.received_eqs.size()) == g.slots);
    }
}

TEST_CASE("complex field runs decode") {
    for (const auto& g : kGolden) {
        if (g.slots > 100) continue;
        CAPTURE(tag(g));
        const auto r = execute<ComplexField>(build_policy(g.model, g.K, g.M), {5, true, nullptr});
        CHECK(r.report.all_decodable());
        CHECK(r.report.feasibility_violations.empty());
        CHECK(r.report.field == "complex");
    }
}

TEST_CASE("runs are deterministic per seed") {
    const Policy p = build_icfd(4);
    const auto a = execute<PrimeField>(p, {8, true, nullptr}), b = execute<PrimeField>(p, {8, true, nullptr});
    CHECK(report_json(a.report) == report_json(b.report));
    CHECK(a.state.rx[1].received_eqs == b.state.rx[1].received_eqs);
    const auto c = execute<PrimeField>(p, {9, true, nullptr});
    CHECK(a.state.rx[1].received_eqs != c.state.rx[1].received_eqs);
}

TEST_CASE("ledger orders follow the phase structure") {
    for (const ModelId& model : {kICFD, kICOF}) {
        const auto r = execute<PrimeField>(build_policy(model, 5, 5), {1, true, nullptr});
        for (const auto& l : r.actual) {
            CAPTURE(l.label);
            if (l.consumed > 0 && l.produced > 0) CHECK(l.produced_order == l.consumed_order + 1);
        }
    }
    const auto x = execute<PrimeField>(build_xsf(3), {1, true, nullptr});
    REQUIRE(x.actual.size() >= 2);
    CHECK(x.actual[0].produced_order == 2);
    CHECK(x.actual[1].consumed_order == 2);
    CHECK(x.actual[1].produced_order == 3);
}

TEST_CASE("phase verification examples") {
    SUBCASE("last full-duplex phase") {
        const auto v = verify_phase<PrimeField>(kICFD, 3, 4, 4, 1);
        CHECK(v.ok());
        CHECK(v.actual.consumed == 4);
        CHECK(v.actual.slots == 3);
        CHECK(v.actual.produced == 0);
    }
    SUBCASE("output-feedback phase two") {
        const auto v = verify_phase<PrimeField>(kICOF, 2, 5, 5, 1);
        const long long a = static_cast<long long>(dof::alpha(2, 5));
        CHECK(v.ok());
        CHECK(v.actual.consumed == 3 * a / 2);
        CHECK(v.actual.slots == a / 2);
        CHECK(v.actual.produced == a / 2);
    }
    SUBCASE("Shannon broadcast phase") {
        const auto v = verify_phase<PrimeField>(kICSF, 4, 4, 4, 1);
        CHECK(v.ok());
        CHECK(v.actual.slots == v.actual.consumed);
        CHECK(v.actual.produced == 0);
        CHECK(v.decodable.size() == 4);
    }
    SUBCASE("X channel case one") {
        const auto v = verify_phase<PrimeField>(kXFD, 2, 6, 4, 1);
        CHECK(v.ok());
        CHECK(v.actual == v.expected);
        CHECK(v.actual.consumed_order == 2);
        CHECK(v.actual.produced_order == 3);
    }
    SUBCASE("complex field") {
        CHECK(verify_phase<ComplexField>(kICFD, 2, 5, 5, 2).ok());
    }
}

TEST_CASE("unsupported configurations are rejected") {
    CHECK_THROWS_AS(build_xfd(4, 4), UnsupportedError);
    CHECK_THROWS_AS(build_icsf(6), UnsupportedError);
    CHECK_THROWS_AS(build_icfd(9), UnsupportedError);
    CHECK_THROWS_AS(phase_for(kXFD, 2, 6, 3), UnsupportedError);
    CHECK_THROWS_AS(build_policy(kICFD, 4, 3), ParameterError);
}

TEST_CASE("traces replay to the same report") {
    for (const auto& g : {kGolden[1], kGolden[12], kGolden[15], kGolden[17]}) {
        CAPTURE(tag(g));
        std::stringstream ss;
        const auto r = execute<PrimeField>(build_policy(g.model, g.K, g.M), {4, true, &ss});
        const ReplayResult rr = replay_trace<PrimeField>(ss);
        CHECK(report_json(rr.recorded) == report_json(r.report));
        CHECK(report_json(rr.replayed) == report_json(r.report));
    }
    std::stringstream cs;
    const auto c = execute<ComplexField>(build_icfd(3), {4, true, &cs});
    const ReplayResult cr = replay_trace<ComplexField>(cs);
    CHECK(report_json(cr.replayed) == report_json(c.report));
}

TEST_CASE("traces are line-oriented JSON") {
    std::stringstream ss;
    execute<PrimeField>(build_icfd(3), {2, true, &ss});
    std::string line;
    int lines = 0;
    nlohmann::json last;
    while (std::getline(ss, line)) {
        last = nlohmann::json::parse(line);
        if (lines < 5) {
            CHECK(last["t"] == lines);
            REQUIRE(last["H"].size() == 3);
            CHECK(last["H"][0].size() == 3);
            CHECK(last["H"][0][0].is_string());
        }
        ++lines;
    }
    CHECK(lines == 6);
    CHECK(last.contains("report"));
    CHECK(last["report"]["empirical_dof"] == "6/5");
}
