// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "k3shim/igusa.hpp"

using namespace k3shim;

namespace {
std::mt19937 rng(90125);

IgusaClebsch<Rat> random_ci() {
    std::uniform_int_distribution<long> d(-9, 9);
    for (;;) {
        IgusaClebsch<Rat> I{Rat(d(rng)), Rat(d(rng)), Rat(d(rng)), Rat(d(rng))};
        if (!is_zero(I.I10)) return I;
    }
}
}  // namespace

TEST_CASE("kumar_forward on a simple quadruple") {
    IgusaClebsch<Rat> I{Rat(1), Rat(0), Rat(0), Rat(4)};
    auto k = kumar_forward(I);
    CHECK(k.a == Rat(0));
    CHECK(k.ap == Rat(-1));
    CHECK(k.b == Rat(0));
    CHECK(k.bp == make_rat(1, 24));
    CHECK(k.bpp == Rat(1));
    CHECK_THROWS_AS(kumar_forward(IgusaClebsch<Rat>{Rat(1), Rat(1), Rat(1), Rat(0)}), Error);
}

TEST_CASE("kumar_inverse inverts kumar_forward") {
    for (int i = 0; i < 100; ++i) {
        auto I = random_ci();
        auto back = kumar_inverse(kumar_forward(I));
        CHECK(back.I2 == I.I2);
        CHECK(back.I4 == I.I4);
        CHECK(back.I6 == I.I6);
        CHECK(back.I10 == I.I10);
    }
}

TEST_CASE("kumar_forward after kumar_inverse, up to a'-normalization") {
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 60; ++i) {
        E7E8Coefficients<Rat> k{Rat(d(rng)), Rat(0), Rat(d(rng)), Rat(d(rng)), Rat(0)};
        while (is_zero(k.ap)) k.ap = Rat(d(rng));
        while (is_zero(k.bpp)) k.bpp = Rat(d(rng));
        auto round = kumar_forward(kumar_inverse(k));
        CHECK(round == normalize_aprime(k));
    }
}

TEST_CASE("kumar_inverse symbolically: the inversion identity over Q(I2,...)") {
    // Symbolic single-variable slices: each I_i in turn as the variable.
    RatFn x = RatFn::variable();
    IgusaClebsch<RatFn> I{x, RatFn(2), RatFn(3), RatFn(5)};
    auto back = kumar_inverse(kumar_forward(I));
    CHECK(back.I2 == I.I2);
    CHECK(back.I4 == I.I4);
    CHECK(back.I6 == I.I6);
    CHECK(back.I10 == I.I10);
}

TEST_CASE("normalize_aprime fixes a' = -1 and is idempotent") {
    E7E8Coefficients<Rat> k{Rat(2), Rat(-1), Rat(4), Rat(7), Rat(5)};
    CHECK(normalize_aprime(k) == k);
    E7E8Coefficients<Rat> k2{Rat(2), Rat(3), Rat(4), Rat(7), Rat(5)};
    auto n = normalize_aprime(k2);
    CHECK(n.ap == Rat(-1));
    CHECK(normalize_aprime(n) == n);
    // Same Clebsch-Igusa invariants up to the weighted scaling.
    auto r1 = kumar_inverse(k2).normalized_ratios();
    auto r2 = kumar_inverse(n).normalized_ratios();
    REQUIRE(r1.has_value());
    REQUIRE(r2.has_value());
    CHECK(*r1 == *r2);
}

TEST_CASE("Clebsch-Igusa weights under the quadratic twist") {
    // (a, a') -> (l^2 a, l^2 a'), (b, b', b'') -> (l^3 ...) multiplies
    // (I2, I4, I6, I10) by (l, l^2, l^3, l^5); normalized ratios unchanged.
    RatFn b = RatFn::variable();
    E7E8Coefficients<RatFn> k{RatFn(-3) * b, RatFn(1), RatFn(-2) * b * b, -(b + RatFn(1)),
                              -b * b * b};
    Rat l(5);
    Rat l2 = l * l, l3 = l2 * l;
    E7E8Coefficients<RatFn> kt{RatFn(l2) * k.a, RatFn(l2) * k.ap, RatFn(l3) * k.b,
                               RatFn(l3) * k.bp, RatFn(l3) * k.bpp};
    auto I = kumar_inverse(k);
    auto It = kumar_inverse(kt);
    CHECK(It.I2 == RatFn(l) * I.I2);
    CHECK(It.I4 == RatFn(l2) * I.I4);
    CHECK(It.I6 == RatFn(l3) * I.I6);
    CHECK(It.I10 == RatFn(l2 * l3) * I.I10);
    CHECK(*I.normalized_ratios() == *It.normalized_ratios());
}

TEST_CASE("quartic_jacobian basics") {
    // Q = t^4 + 1: I = 12, J = 0, Jacobian Y^2 = X^3 - 324 X.
    auto jac = quartic_jacobian(polyq({1, 0, 0, 0, 1}));
    CHECK(jac.I == Rat(12));
    CHECK(jac.J == Rat(0));
    CHECK(jac.long_coeffs[3] == Rat(-324));
    CHECK(jac.long_coeffs[4] == Rat(0));
    // repeated root
    CHECK_THROWS_AS(quartic_jacobian(polyq({0, 0, 1, 0, 1})), Error);
}

TEST_CASE("e7e8_to_surface produces the E7 + E8 configuration") {
    // Generic symbolic quintuple over Q(b): (-3b, 1, -2b^2, -(b+1), -b^3).
    RatFn b = RatFn::variable();
    E7E8Coefficients<RatFn> k{RatFn(-3) * b, RatFn(1), RatFn(-2) * b * b, -(b + RatFn(1)),
                              -b * b * b};
    auto S = e7e8_to_surface(k);
    auto cfg = fiber_configuration(S);
    std::vector<RootLattice> expect = {{RootKind::E, 7}, {RootKind::E, 8}};
    std::sort(expect.begin(), expect.end());
    CHECK(cfg.root_sum() == expect);
    CHECK_THROWS_AS(
        e7e8_to_surface(E7E8Coefficients<Rat>{Rat(1), Rat(0), Rat(1), Rat(1), Rat(1)}), Error);
}

TEST_CASE("refiber_n6 reproduces the target quintuple symbolically") {
    RatFn b = RatFn::variable();
    auto rf = refiber_n6(b);
    CHECK(rf.coeffs.a == RatFn(-3) * b);
    CHECK(rf.coeffs.ap == RatFn(1));
    CHECK(rf.coeffs.b == RatFn(-2) * b * b);
    CHECK(rf.coeffs.bp == -(b + RatFn(1)));
    CHECK(rf.coeffs.bpp == -b * b * b);
    CHECK(rf.quartic.degree() == 4);
}

TEST_CASE("refiber_n6 at numeric values of b") {
    auto rf = refiber_n6(Rat(1));  // b = r^2 at r = 1
    CHECK(rf.coeffs.a == Rat(-3));
    CHECK(rf.coeffs.bpp == Rat(-1));
    CHECK_THROWS_AS(refiber_n6(Rat(0)), Error);
}

TEST_CASE("the two height-5/2 sections and their Gram matrix") {
    // On the surface with quintuple (-3b, 1, -2b^2, -(b+1), -b^3), b = r^2:
    // P = (r^6 t^4 + 2(r^4+r^3) t^3 + (r^2+1) t^2,
    //      r^9 t^6 + 3(r^7+r^6) t^5 + 3(r^5+r^4+r^3) t^4 + (r^3+1) t^3)
    // and its image under r -> -r.
    RatFn r = RatFn::variable();
    RatFn b = r * r;
    E7E8Coefficients<RatFn> k{RatFn(-3) * b, RatFn(1), RatFn(-2) * b * b, -(b + RatFn(1)),
                              -b * b * b};
    auto S = e7e8_to_surface(k);
    auto cfg = fiber_configuration(S);
    auto section_for = [&](const RatFn& rr) {
        RatFn z(0);
        Polynomial<RatFn> X(
            {z, z, rr * rr + RatFn(1), RatFn(2) * (rr.pow(4) + rr.pow(3)),
             rr.pow(6)});
        Polynomial<RatFn> Y({z, z, z, rr.pow(3) + RatFn(1),
                             RatFn(3) * (rr.pow(5) + rr.pow(4) + rr.pow(3)),
                             RatFn(3) * (rr.pow(7) + rr.pow(6)), rr.pow(9)});
        return Section<RatFn>{RationalFunction<RatFn>(X), RationalFunction<RatFn>(Y)};
    };
    auto P = section_for(r);
    auto Q = section_for(-r);
    auto hp = verify_section(S, P, &cfg);
    auto hq = verify_section(S, Q, &cfg);
    CHECK(hp.height == make_rat(5, 2));
    CHECK(hq.height == make_rat(5, 2));
    auto gram = height_gram(S, {P, Q}, &cfg);
    CHECK(det_rat(gram) == Rat(6));
    CHECK(gram[0][1] == make_rat(1, 2));
}

TEST_CASE("N=6 Clebsch-Igusa output and the printed-source discrepancy") {
    auto out = n6_clebsch_igusa(Rat(4));
    CHECK(out.computed.I2 == Rat(120));  // 24 (b + 1)
    CHECK(out.computed.I4 == Rat(144));  // 36 b
    CHECK(out.computed.I6 == Rat(6912)); // 72 b (5b + 4)
    CHECK(out.computed.I10 == Rat(256)); // 4 b^3
    CHECK(out.printed_I2 == Rat(97));    // (24 b + 1) as printed
    CHECK(!out.printed_matches);
    // Symbolic: computed I-values match 24(b+1), 36b, 72b(5b+4), 4b^3.
    RatFn b = RatFn::variable();
    auto sym = n6_clebsch_igusa(b);
    CHECK(sym.computed.I2 == RatFn(24) * (b + RatFn(1)));
    CHECK(sym.computed.I4 == RatFn(36) * b);
    CHECK(sym.computed.I6 == RatFn(72) * b * (RatFn(5) * b + RatFn(4)));
    CHECK(sym.computed.I10 == RatFn(4) * b * b * b);
    CHECK(!sym.printed_matches);
}
