#include "doctest.h"

#include "retroalign/algebra/symbol.hpp"
#include "retroalign/sim/channel.hpp"
#include "retroalign/sim/simulator.hpp"

using namespace retroalign;

namespace {

using P = PrimeField;
using PE = LinearExpr<P>;

struct ThreeUser {
    NodeState<P> state;
    ChannelRealization<P> ch;
    SymbolPool pool;
    SymbolId u, v;

    ThreeUser(const ModelId& model, bool strict = true)
        : state(make_state<P>(model, 3, 3, strict)), ch(generate_channel<P>(3, 3, 5, 7, model.full_duplex())) {
        u = pool.mint(0, 0);
        v = pool.mint(1, 1);
        grant_own(state, 0, {u});
        grant_own(state, 1, {v});
    }

    void slot1() {
        SlotPlan<P> plan;
        plan.t = 0;
        plan.transmissions[0] = {PE::unit(u), {}};
        plan.transmissions[1] = {PE::unit(v), {}};
        apply_slot(state, plan, ch);
    }

    PE lc() const { return state.rx[2].received_eqs.at(0); }
};

} // namespace

TEST_CASE("channel realizations") {
    const auto a = generate_channel<P>(3, 3, 5, 11, true), b = generate_channel<P>(3, 3, 5, 11, true);
    CHECK(a.cross.size() == 5);
    CHECK(a.cross[0].size() == 9);
    CHECK(a.cross == b.cross);
    CHECK(a.fullduplex == b.fullduplex);
    for (const auto& h : a.cross)
        for (auto x : h) CHECK(x != 0);
    CHECK(generate_channel<P>(3, 3, 5, 12, true).cross != a.cross);
    const auto c = generate_channel<ComplexField>(2, 3, 2, 1, false);
    CHECK(c.cross[1].size() == 6);
    CHECK(!c.has_fullduplex);
}

TEST_CASE("receiver sees the channel-weighted sum") {
    ThreeUser s(kICFD);
    s.slot1();
    const PE want = PE::unit(s.u).scaled(s.ch.h(0, 2, 0)) + PE::unit(s.v).scaled(s.ch.h(0, 2, 1));
    CHECK(s.lc() == want);
    CHECK(s.state.t == 1);
    for (const auto& rx : s.state.rx) CHECK(rx.received_eqs.size() == 1);
}

TEST_CASE("full duplex lets TX1 learn v") {
    ThreeUser fd(kICFD);
    CHECK(!tx_can_form(fd.state, 0, PE::unit(fd.v)));
    fd.slot1();
    CHECK(tx_can_form(fd.state, 0, PE::unit(fd.v)));
    CHECK(tx_can_form(fd.state, 1, PE::unit(fd.u)));
    CHECK(!tx_can_form(fd.state, 2, PE::unit(fd.u)));
    CHECK(tx_can_form(fd.state, 0, fd.lc()));
}

TEST_CASE("own symbols only under delayed CSIT") {
    ThreeUser s(kICFD);
    CHECK(tx_can_form(s.state, 0, PE::unit(s.u)));
    CHECK(!tx_can_form(s.state, 0, PE::unit(s.v)));
    CHECK(!tx_can_form(s.state, 2, PE::unit(s.u)));
}

TEST_CASE("Shannon feedback reconstructs the interference") {
    ThreeUser s(kICSF);
    s.slot1();
    for (int t = 1; t < 3; ++t) {
        SlotPlan<P> silent;
        silent.t = t;
        apply_slot(s.state, silent, s.ch);
    }
    CHECK(tx_can_form(s.state, 0, s.lc()));
    SlotPlan<P> send;
    send.t = 3;
    send.transmissions[0] = {s.lc(), {0, std::nullopt}};
    CHECK_NOTHROW(apply_slot(s.state, send, s.ch));
    CHECK(s.state.violations.empty());
}

TEST_CASE("silent slot appends zero equations") {
    ThreeUser s(kICOF);
    SlotPlan<P> silent;
    silent.t = 0;
    apply_slot(s.state, silent, s.ch);
    for (const auto& rx : s.state.rx) {
        REQUIRE(rx.received_eqs.size() == 1);
        CHECK(rx.received_eqs[0].is_zero());
        CHECK(rx.csi_slots == 1);
    }
    CHECK(s.state.t == 1);
}

TEST_CASE("coefficient causality") {
    SUBCASE("current cross CSI is unknown") {
        ThreeUser s(kICFD);
        SlotPlan<P> p;
        p.t = 0;
        p.transmissions[0] = {PE::unit(s.u), {0, std::nullopt}};
        CHECK_THROWS_AS(apply_slot(s.state, p, s.ch), FeasibilityError);
    }
    SUBCASE("current full-duplex row is known") {
        ThreeUser s(kICFD);
        SlotPlan<P> p;
        p.t = 0;
        p.transmissions[0] = {PE::unit(s.u), {std::nullopt, 0}};
        CHECK_NOTHROW(apply_slot(s.state, p, s.ch));
    }
    SUBCASE("output feedback has no CSIT") {
        ThreeUser s(kICOF);
        s.slot1();
        SlotPlan<P> p;
        p.t = 1;
        p.transmissions[0] = {PE::unit(s.u), {0, std::nullopt}};
        CHECK_THROWS_AS(apply_slot(s.state, p, s.ch), FeasibilityError);
    }
    SUBCASE("values outside the span are recorded when not strict") {
        ThreeUser s(kICFD, false);
        SlotPlan<P> p;
        p.t = 0;
        p.transmissions[2] = {PE::unit(s.u), {}};
        CHECK_NOTHROW(apply_slot(s.state, p, s.ch));
        REQUIRE(s.state.violations.size() == 1);
        CHECK(s.state.violations[0].tx == 2);
        CHECK(s.state.violations[0].t == 0);
    }
    SUBCASE("slot index must follow the clock") {
        ThreeUser s(kICFD);
        SlotPlan<P> p;
        p.t = 3;
        CHECK_THROWS(apply_slot(s.state, p, s.ch));
    }
}

TEST_CASE("finalize reports decodability and DoF") {
    ThreeUser s(kICFD);
    std::map<int, std::set<SymbolId>> desired{{0, {s.u}}, {1, {s.v}}};
    const SimReport empty = finalize(s.state, desired);
    CHECK(!empty.empirical_dof);
    CHECK(!empty.note.empty());
    CHECK(!empty.ok());

    s.slot1();
    SlotPlan<P> p;
    p.t = 1;
    p.transmissions[0] = {PE::unit(s.u), {}};
    p.transmissions[1] = {PE::unit(s.v), {}};
    apply_slot(s.state, p, s.ch);
    const SimReport r = finalize(s.state, desired);
    CHECK(r.all_decodable());
    REQUIRE(r.empirical_dof);
    CHECK(*r.empirical_dof == Rational(1));

    s.state.rx[0].received_eqs.pop_back();
    const SimReport w = finalize(s.state, desired);
    CHECK(!w.per_rx_decodable.at(0));
    CHECK(w.per_rx_decodable.at(1));
}
