// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "k3shim/heights.hpp"
#include "k3shim/surface.hpp"
#include "k3shim/tate.hpp"

using namespace k3shim;

namespace {

std::mt19937 rng(424242);

using PQ = Polynomial<Rat>;
using SQ = SurfaceModel<Rat>;
using PF = Polynomial<RatFn>;
using SF = SurfaceModel<RatFn>;

PF pf(const std::vector<RatFn>& v) { return PF(v); }

// Y^2 = X^3 + t X^2 + 2 b t^3 (t-1) X + b^2 t^5 (t-1)^2 over Q(b).
SF family_n6() {
    RatFn b = RatFn::variable();
    RatFn z(0), one(1);
    PF a = pf({z, one});                                    // t
    PF B = pf({z, z, z, RatFn(-2) * b, RatFn(2) * b});      // 2b t^3 (t-1)
    PF C = pf({z, z, z, z, z, b * b, RatFn(-2) * b * b, b * b});  // b^2 t^5 (t-1)^2
    return SF::make_extended(a, B, C);
}

SQ n6_at(const Rat& bval) { return specialize(family_n6(), bval); }

// Y^2 = X^3 + t X^2 + 2 t^4 X + t^7  (the b -> 0 chart limit)
SQ surface_d10e8() {
    return SQ::make_extended(polyq({0, 1}), polyq({0, 0, 0, 0, 2}),
                             polyq({0, 0, 0, 0, 0, 0, 0, 1}));
}

// Y^2 = X^3 + t^5 (t-1)^2  (the b -> infinity chart limit)
SQ surface_a2e8e8() {
    return SQ::make_short(PQ(), polyq({0, 0, 0, 0, 0, 1, -2, 1}));
}

// Shioda-Hall: Y^2 = X^3 + (t^4+3t^3+6t^2+7t+4) X^2 - 2(t^3+2t^2+3t+2) X + (t^2+t+1)
SQ shioda_hall_a18() {
    return SQ::make_extended(polyq({4, 7, 6, 3, 1}), polyq({-4, -6, -4, -2}), polyq({1, 1, 1}));
}

// Y^2 = X^3 + (t^3+8t) X^2 - (32t^2+128) X + 256 t
SQ shioda_hall_d18() {
    return SQ::make_extended(polyq({0, 8, 0, 1}), polyq({-128, 0, -32}), polyq({0, 256}));
}

// Y^2 = X^3 + (9t^4-16t^3+4t) X^2 + (72t^5-128t^4) X + (144t^6-256t^5)
SQ surface_n57_infinity() {
    return SQ::make_extended(polyq({0, 4, 0, -16, 9}), polyq({0, 0, 0, 0, -128, 72}),
                             polyq({0, 0, 0, 0, 0, -256, 144}));
}

bool config_matches(const FiberConfiguration<Rat>& cfg, std::vector<RootLattice> expect) {
    auto got = cfg.root_sum();
    std::sort(expect.begin(), expect.end());
    return got == expect;
}

}  // namespace

TEST_CASE("to_short_form round trip and substitution record") {
    // Extended (a,b,c): completing the cube must kill the X^2 term.
    auto S = SQ::make_extended(polyq({1, 2}), polyq({0, 3}), polyq({5}));
    auto sf = to_short_form(S);
    // Check by re-substituting a random X value at a random t.
    Rat t0(3), x0(7);
    Rat a = polyq({1, 2}).evaluate(t0), b = polyq({0, 3}).evaluate(t0), c = Rat(5);
    Rat lhs = x0 * x0 * x0 + a * x0 * x0 + b * x0 + c;
    Rat xs = x0 + sf.map.sx.evaluate(t0);
    Rat rhs = xs * xs * xs + sf.model.A().evaluate(t0) * xs + sf.model.B().evaluate(t0);
    CHECK(lhs == rhs);
}

TEST_CASE("surface discriminant: pure-B model") {
    // A = 0, B = t^5 (t-1)^2: Delta = -432 t^10 (t-1)^4
    auto S = surface_a2e8e8();
    auto d = surface_discriminant(S);
    PQ expect = Rat(-432) * (polyq({0, 1}).pow(10)) * (polyq({-1, 1}).pow(4));
    CHECK(d.delta == expect);
    CHECK(d.v_infinity == 24 - 14);
}

TEST_CASE("surface discriminant: constant singular model") {
    auto S = SQ::make_short(polyq({-3}), polyq({2}));
    CHECK_THROWS_AS(surface_discriminant(S), Error);
}

TEST_CASE("K3 certificate rejects constant models") {
    auto S = SQ::make_short(PQ(), polyq({1}));
    CHECK_THROWS_AS(check_k3(S), Error);
}

TEST_CASE("family discriminant identity over Q(b)") {
    auto S = family_n6();
    auto d = surface_discriminant(S);
    RatFn b = RatFn::variable();
    RatFn z(0);
    PF t = pf({z, RatFn(1)});
    PF tm1 = pf({RatFn(-1), RatFn(1)});
    PF delta1 = pf({RatFn(-4), RatFn(-27) * b, RatFn(27) * b});  // 27b(t^2-t) - 4
    PF expect = (RatFn(-16) * b * b * b) * t.pow(9) * tm1.pow(3) * delta1;
    CHECK(d.delta == expect);
}

TEST_CASE("fiber configuration of the A2 D7 E8 family") {
    // Symbolic over Q(b).
    auto cfg = fiber_configuration(family_n6());
    std::vector<RootLattice> expect = {{RootKind::A, 2}, {RootKind::D, 7}, {RootKind::E, 8}};
    std::sort(expect.begin(), expect.end());
    CHECK(cfg.root_sum() == expect);
    CHECK(cfg.euler_total == 24);
    long i1 = 0;
    for (const auto& f : cfg.fibers)
        if (f.type.kind == KodairaKind::In && f.type.n == 1) i1 += f.place.degree();
    CHECK(i1 == 2);
    // And at a rational value.
    auto cfg2 = fiber_configuration(n6_at(Rat(2)));
    CHECK(config_matches(cfg2, {{RootKind::A, 2}, {RootKind::D, 7}, {RootKind::E, 8}}));
}

TEST_CASE("fiber types at the named places of the N=6 family") {
    auto S = n6_at(Rat(2));
    auto sf = to_short_form(S);
    auto d = surface_discriminant(S);
    CHECK(classify_fiber_short(sf.model.A(), sf.model.B(), d.delta,
                               Place<Rat>{false, polyq({-1, 1})}) ==
          KodairaType{KodairaKind::In, 3});
    CHECK(classify_fiber_short(sf.model.A(), sf.model.B(), d.delta,
                               Place<Rat>{false, polyq({0, 1})}) ==
          KodairaType{KodairaKind::Instar, 3});
    CHECK(classify_fiber_short(sf.model.A(), sf.model.B(), d.delta, Place<Rat>{true, {}}) ==
          KodairaType{KodairaKind::IIstar, 0});
}

TEST_CASE("classify_fiber errors on smooth places") {
    auto S = n6_at(Rat(2));
    CHECK_THROWS_AS(classify_fiber(S, Place<Rat>{false, polyq({-7, 1})}), Error);
}

TEST_CASE("Shioda-Hall surface has I19 at infinity") {
    auto cfg = fiber_configuration(shioda_hall_a18());
    bool found = false;
    for (const auto& f : cfg.fibers)
        if (f.place.at_infinity) {
            CHECK(f.type == KodairaType{KodairaKind::In, 19});
            REQUIRE(f.contribution.has_value());
            CHECK(*f.contribution == RootLattice{RootKind::A, 18});
            REQUIRE(f.components_rational.has_value());
            CHECK(*f.components_rational);
            found = true;
        }
    CHECK(found);
    CHECK(cfg.euler_total == 24);
}

TEST_CASE("second Shioda-Hall surface has a D18 fiber at infinity") {
    auto cfg = fiber_configuration(shioda_hall_d18());
    bool found = false;
    for (const auto& f : cfg.fibers)
        if (f.place.at_infinity) {
            CHECK(f.type == KodairaType{KodairaKind::Instar, 14});
            REQUIRE(f.contribution.has_value());
            CHECK(*f.contribution == RootLattice{RootKind::D, 18});
            found = true;
        }
    CHECK(found);
}

TEST_CASE("chart surfaces at the N=6 boundary points") {
    auto cfg0 = fiber_configuration(surface_d10e8());
    CHECK(config_matches(cfg0, {{RootKind::D, 10}, {RootKind::E, 8}}));
    auto cfgi = fiber_configuration(surface_a2e8e8());
    CHECK(config_matches(cfgi, {{RootKind::A, 2}, {RootKind::E, 8}, {RootKind::E, 8}}));
    // The A2 comes from an additive type IV fiber at t=1.
    bool saw_iv = false;
    for (const auto& f : cfgi.fibers)
        if (!f.place.at_infinity && f.type.kind == KodairaKind::IV &&
            f.place.pi == polyq({-1, 1}))
            saw_iv = true;
    CHECK(saw_iv);
}

TEST_CASE("N=57 r -> infinity surface: D6 at zero, 2-torsion, section of height 19/12") {
    auto S = surface_n57_infinity();
    auto cfg = fiber_configuration(S);
    CHECK(config_matches(cfg, {{RootKind::D, 6}, {RootKind::A, 11}}));
    // 2-torsion (-4t, 0)
    Section<Rat> tor{RatFn(polyq({0, -4})), RatFn()};
    auto ht = verify_section(S, tor, &cfg);
    CHECK(ht.height == Rat(0));
    CHECK(ht.torsion);
    // section X = 4t^3 - 8t^2 with Y = 4 (3t-5)(t^4 - t^3); the factor 4 makes
    // Y^2 match the right-hand side exactly.
    Section<Rat> sec{RatFn(polyq({0, 0, -8, 4})),
                     RatFn(Rat(4) * polyq({-5, 3}) * polyq({0, 0, 0, -1, 1}))};
    auto hs = verify_section(S, sec, &cfg);
    CHECK(hs.height == make_rat(19, 12));
    // |disc NS| = 4 * 12 * (19/12) / 2^2 = 19
    CHECK(ns_discriminant(S, cfg, {sec}, 2) == Rat(19));
}

TEST_CASE("height 19/12 section on the N=6 family at b = 81/64") {
    Rat b = make_rat(81, 64);
    auto S = n6_at(b);
    auto cfg = fiber_configuration(S);
    // X = b (t^2 - t^3)(1 - 9t), Y = b^(3/2) (t^4 - t^3)(27 t^2 - 18 t - 1)
    PQ X = b * polyq({0, 0, 1, -1}) * polyq({1, -9});
    PQ Y = make_rat(729, 512) * polyq({0, 0, 0, -1, 1}) * polyq({-1, -18, 27});
    Section<Rat> sec{RatFn(X), RatFn(Y)};
    auto h = verify_section(S, sec, &cfg);
    CHECK(h.po == 0);
    CHECK(h.height == make_rat(19, 12));
    // corrections: 2/3 at the A2 (t=1), 7/4 at the far D7 component (t=0)
    Rat a2(0), d7(0);
    for (const auto& c : h.corrections) {
        if (c.fiber == "I3") a2 = c.value;
        if (c.fiber == "I3*") d7 = c.value;
    }
    CHECK(a2 == make_rat(2, 3));
    CHECK(d7 == make_rat(7, 4));
    CHECK(ns_discriminant(S, cfg, {sec}, 1) == Rat(19));
}

TEST_CASE("specialize: N=6 family") {
    // b = -16/27 merges the two I1 fibers into an I2.
    auto S = n6_at(make_rat(-16, 27));
    auto cfg = fiber_configuration(S);
    CHECK(config_matches(cfg, {{RootKind::A, 1}, {RootKind::A, 2}, {RootKind::D, 7},
                               {RootKind::E, 8}}));
    CHECK(ns_discriminant(S, cfg, {}, 1) == Rat(24));
    // b = 0 is a genuine degeneration of the chart.
    CHECK_THROWS_AS(n6_at(Rat(0)), Error);
}

TEST_CASE("height pairing basics") {
    Rat b = make_rat(81, 64);
    auto S = n6_at(b);
    auto cfg = fiber_configuration(S);
    PQ X = b * polyq({0, 0, 1, -1}) * polyq({1, -9});
    PQ Y = make_rat(729, 512) * polyq({0, 0, 0, -1, 1}) * polyq({-1, -18, 27});
    Section<Rat> P{RatFn(X), RatFn(Y)};
    Section<Rat> nP{RatFn(X), -RatFn(Y) };
    CHECK(height_pairing(S, P, P, &cfg) == make_rat(19, 12));
    CHECK(height_pairing(S, P, nP, &cfg) == make_rat(-19, 12));
}

TEST_CASE("minimal_section_height budgets") {
    // A2(1) + D7(far) + E8, P.O = 0 -> 19/12
    CHECK(minimal_section_height({{{RootKind::A, 2}, 1}, {{RootKind::D, 7}, 2},
                                  {{RootKind::E, 8}, 0}},
                                 0) == make_rat(19, 12));
    // A2(1) + A4(2) + A10(2), P.O = 1 -> 412/165
    CHECK(minimal_section_height({{{RootKind::A, 2}, 1}, {{RootKind::A, 4}, 2},
                                  {{RootKind::A, 10}, 2}},
                                 1) == make_rat(412, 165));
    // identity everywhere
    CHECK(minimal_section_height({{{RootKind::A, 5}, 0}}, 0) == Rat(4));
    CHECK_THROWS_AS(minimal_section_height({{{RootKind::E, 8}, 1}}, 0), Error);
}

TEST_CASE("abc trick: designed and random instances") {
    // Random (a, b, c) with the (nu, 2 nu) pattern at t0 = 0.
    std::uniform_int_distribution<int> dc(-6, 6);
    auto rnd = [&](int lo_deg, int deg, bool unit0) {
        std::vector<Rat> c;
        for (int i = 0; i < lo_deg; ++i) c.emplace_back(0);
        for (int i = lo_deg; i <= deg; ++i) {
            int v = dc(rng);
            if (i == lo_deg && unit0)
                while (v == 0) v = dc(rng);
            c.emplace_back(v);
        }
        return PQ(c);
    };
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 50; ++trial) {
        int nu = 1 + (trial % 3);
        PQ a = rnd(0, 2, true);
        PQ b = rnd(nu, nu + 3, true);
        PQ c = rnd(2 * nu, 2 * nu + 4, true);
        if (b.is_zero_poly() || c.is_zero_poly()) continue;
        AbcReport rep;
        try {
            rep = abc_trick_check(a, b, c, Rat(0));
        } catch (const Error&) {
            continue;
        }
        ++checked;
        CHECK(rep.always_clause);
        CHECK(rep.small_mu_clause);
        // Direct oracle: valuation of the discriminant matches the report.
        auto S = SQ::make_extended(a, Rat(2) * b, c);
        auto d = surface_discriminant(S);
        CHECK(rep.v_delta == factor_multiplicity(d.delta, polyq({0, 1})));
    }
    CHECK(checked == 50);
    CHECK_THROWS_AS(abc_trick_check(polyq({1}), PQ(), PQ(), Rat(0)), Error);
}

TEST_CASE("scaling t and constant twists preserve fiber data") {
    auto S = n6_at(Rat(3));
    auto cfg = fiber_configuration(S);
    auto types = cfg.root_sum();
    // t -> 5t
    auto S2 = rescale_t(S, Rat(5));
    CHECK(fiber_configuration(S2).root_sum() == types);
    // twist by lambda = 7: Delta -> 7^6 Delta
    auto tw = quadratic_twist(S, PQ(Rat(7)));
    auto d1 = surface_discriminant(S);
    auto d2 = surface_discriminant(tw);
    CHECK(d2.delta == Rat(117649) * d1.delta);
    CHECK(fiber_configuration(tw).root_sum() == types);
}

TEST_CASE("Euler sum is 24 at random parameter values of the N=6 family") {
    std::uniform_int_distribution<long> db(-40, 40);
    int done = 0;
    while (done < 20) {
        Rat b(db(rng));
        if (is_zero(b)) continue;
        if (b == make_rat(-16, 27)) continue;
        auto cfg = fiber_configuration(n6_at(b));
        CHECK(cfg.euler_total == 24);
        ++done;
    }
}
