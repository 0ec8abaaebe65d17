// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "k3shim/catalog.hpp"
#include "k3shim/families.hpp"
#include "k3shim/lattice.hpp"

using namespace k3shim;

namespace {
std::mt19937 rng(606060);

bool roots_match(const FiberConfiguration<Rat>& cfg, std::vector<RootLattice> expect) {
    std::sort(expect.begin(), expect.end());
    return cfg.root_sum() == expect;
}
}  // namespace

TEST_CASE("family builders: generic configurations") {
    auto f6 = build_family(6);
    auto c6 = fiber_configuration(f6.symbolic);
    std::vector<RootLattice> e6 = f6.generic_roots;
    std::sort(e6.begin(), e6.end());
    CHECK(c6.root_sum() == e6);

    auto f14 = build_family(14);
    auto c14 = fiber_configuration(f14.symbolic);
    std::vector<RootLattice> e14 = f14.generic_roots;
    std::sort(e14.begin(), e14.end());
    CHECK(c14.root_sum() == e14);

    auto f57 = build_family(57);
    auto c57 = fiber_configuration(f57.symbolic);
    std::vector<RootLattice> e57 = f57.generic_roots;
    std::sort(e57.begin(), e57.end());
    CHECK(c57.root_sum() == e57);
}

TEST_CASE("level 14: t^7 divides Delta symbolically") {
    auto fd = build_family(14);
    auto d = surface_discriminant(fd.symbolic);
    Polynomial<RatFn> t{RatFn(0), RatFn(1)};
    CHECK(factor_multiplicity(d.delta, t) == 7);
}

TEST_CASE("level 57: the generic section has height 19/12 and disc 114") {
    auto fd = build_family(57);
    REQUIRE(fd.generic_sections.size() == 1);
    auto cfg = fiber_configuration(fd.symbolic);
    auto h = verify_section(fd.symbolic, fd.generic_sections[0], &cfg);
    CHECK(h.height == make_rat(19, 12));
    CHECK(ns_discriminant(fd.symbolic, cfg, fd.generic_sections, 1) == Rat(114));
    // the section meets the A5 in the farthest component, the A11 nearest
    Rat a5(0), a11(0);
    for (const auto& c : h.corrections) {
        if (c.fiber == "I6") a5 = c.value;
        if (c.fiber == "I12") a11 = c.value;
    }
    CHECK(a5 == make_rat(3, 2));
    CHECK(a11 == make_rat(11, 12));
}

TEST_CASE("generic ns_discriminant equals 2N for all three families") {
    auto f6 = build_family(6);
    auto cfg6 = fiber_configuration(f6.symbolic);
    CHECK(ns_discriminant(f6.symbolic, cfg6, {}, 1) == Rat(12));
    auto f14 = build_family(14);
    auto cfg14 = fiber_configuration(f14.symbolic);
    CHECK(ns_discriminant(f14.symbolic, cfg14, {}, 1) == Rat(28));
    auto f57 = build_family(57);
    auto cfg57 = fiber_configuration(f57.symbolic);
    CHECK(ns_discriminant(f57.symbolic, cfg57, f57.generic_sections, 1) == Rat(114));
}

TEST_CASE("configurations hold at twenty random parameter values each") {
    std::uniform_int_distribution<long> dv(2, 60);
    auto sample = [&](long N, int wanted) {
        auto fd = build_family(N);
        int done = 0;
        while (done < wanted) {
            Rat v(dv(rng));
            SurfaceModel<Rat> S;
            try {
                S = family_at(fd, v);
            } catch (const Error&) {
                continue;
            }
            FiberConfiguration<Rat> cfg;
            try {
                cfg = fiber_configuration(S);
            } catch (const Error&) {
                continue;
            }
            std::vector<RootLattice> expect = fd.generic_roots;
            std::sort(expect.begin(), expect.end());
            if (cfg.root_sum() != expect) continue;  // CM point hit by chance
            CHECK(cfg.euler_total == 24);
            ++done;
        }
    };
    sample(6, 20);
    sample(14, 20);
    sample(57, 20);
}

TEST_CASE("level 14: easy degenerations") {
    auto fd = build_family(14);
    auto S0 = family_at(fd, Rat(0));
    CHECK(roots_match(fiber_configuration(S0),
                      {{RootKind::A, 3}, {RootKind::E, 7}, {RootKind::E, 8}}));
    auto Sm12 = family_at(fd, make_rat(-1, 2));
    CHECK(roots_match(fiber_configuration(Sm12), {{RootKind::A, 10}, {RootKind::E, 8}}));
}

TEST_CASE("level 14: involution and the s-coordinate") {
    Rat r = make_rat(-35, 44);
    auto r2 = involution(14, r);
    REQUIRE(r2.has_value());
    CHECK(*r2 == make_rat(-35, 26));
    // s = r^2/(2r+1) is invariant
    auto s_of = [](const Rat& x) -> Rat { return x * x / (Rat(2) * x + Rat(1)); };
    CHECK(s_of(r) == s_of(*r2));
    CHECK(s_of(r) == make_rat(-1225, 1144));
    // -s/(s+1) = -1225/81
    Rat s = s_of(r);
    CHECK(-s / (s + Rat(1)) == make_rat(-1225, 81));
    // pole of the involution
    CHECK(!involution(14, make_rat(-1, 2)).has_value());
}

TEST_CASE("involutions are involutions") {
    std::uniform_int_distribution<long> dv(-25, 25);
    for (long N : {6L, 14L, 57L, 206L}) {
        for (int i = 0; i < 50; ++i) {
            Rat v(dv(rng));
            auto w = involution(N, v);
            if (!w) continue;
            auto back = involution(N, *w);
            REQUIRE(back.has_value());
            CHECK(*back == v);
        }
    }
    CHECK(*involution(206, Rat(2)) == Rat(-2));
    CHECK(*involution(6, Rat(3)) == Rat(-3));
}

TEST_CASE("n6 charts at beta = 0 and the scaling check at beta = 1") {
    auto S0 = n6_chart(N6Chart::near_zero, Rat(0));
    CHECK(roots_match(fiber_configuration(S0), {{RootKind::D, 10}, {RootKind::E, 8}}));
    auto Si = n6_chart(N6Chart::near_infinity, Rat(0));
    CHECK(roots_match(fiber_configuration(Si),
                      {{RootKind::A, 2}, {RootKind::E, 8}, {RootKind::E, 8}}));
    // near_zero at beta = 1 is literally the family at b = 1
    auto fd = build_family(6);
    auto S1 = n6_chart(N6Chart::near_zero, Rat(1));
    auto F1 = family_at(fd, Rat(1));
    CHECK(S1.coeffs[0] == F1.coeffs[0]);
    CHECK(S1.coeffs[1] == F1.coeffs[1]);
    CHECK(S1.coeffs[2] == F1.coeffs[2]);
}

TEST_CASE("solve_square_section_n6 reproduces the printed derivation") {
    auto sol = solve_square_section_n6();
    CHECK(sol.b == make_rat(81, 64));
    CHECK(sol.t1 == Rat(-9));
    CHECK(sol.square_root == polyq({-1, -18, 27}));
    CHECK(sol.square_root * sol.square_root == sol.quartic_at_root);
    // downstream coordinate: 1 + 27b/16 = 3211/2^10
    CHECK(Rat(1) + Rat(27) * sol.b / Rat(16) == make_rat(3211, 1024));
}

TEST_CASE("n57 rational point table") {
    auto table = n57_rational_points();
    REQUIRE(table.size() == 6);
    std::vector<std::pair<long, Rat>> expect = {{1, Rat(2)},        {2, Rat(1)},
                                                {3, Rat(-1)},       {4, Rat(0)},
                                                {5, make_rat(5, 4)}, {8, make_rat(13, 9)}};
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(table[i].n == expect[i].first);
        CHECK(table[i].r == expect[i].second);
    }
    CHECK(table[5].minus_d == 163);
}

TEST_CASE("level 57 charts") {
    // r -> infinity limit equals the frozen model with D6 + A11.
    auto ci = n57_chart_infinity();
    CHECK(ci.model.coeffs[0] == polyq({0, 4, 0, -16, 9}));
    CHECK(ci.model.coeffs[1] == polyq({0, 0, 0, 0, -128, 72}));
    CHECK(ci.model.coeffs[2] == polyq({0, 0, 0, 0, 0, -256, 144}));
    // r = 1 limit equals the second Shioda-Hall surface, coefficient for
    // coefficient.
    auto c1 = n57_chart_r1();
    CHECK(c1.model.coeffs[0] == polyq({0, 8, 0, 1}));
    CHECK(c1.model.coeffs[1] == polyq({-128, 0, -32}));
    CHECK(c1.model.coeffs[2] == polyq({0, 256}));
    // r = -1 limit: an A17 with the surviving generic section of height 8/9.
    auto cm1 = n57_chart_rm1();
    auto cfg = fiber_configuration(cm1.model);
    CHECK(roots_match(cfg, {{RootKind::A, 17}}));
    REQUIRE(cm1.sections.size() == 1);
    auto h = verify_section(cm1.model, cm1.sections[0], &cfg);
    CHECK(h.height == make_rat(8, 9));
}

TEST_CASE("catalog: every record verifies") {
    for (long N : {6L, 14L, 57L, 206L}) {
        auto cat = cm_catalog(N);
        for (const auto& rec : cat) {
            INFO("level " << N << " parameter " << rec.parameter_str() << " D = "
                          << rec.discriminant);
            auto rep = verify_cm_record(rec);
            CHECK(rep.ok);
        }
    }
}

TEST_CASE("catalog sizes and specific discriminants") {
    CHECK(cm_catalog(6).size() == 4);
    CHECK(cm_catalog(14).size() == 4);
    CHECK(cm_catalog(57).size() == 11);
    CHECK(cm_catalog(206).size() == 7);
    // N=57 covers the printed discriminant list
    std::vector<long> ds;
    for (const auto& r : cm_catalog(57)) ds.push_back(-r.discriminant);
    std::sort(ds.begin(), ds.end());
    CHECK(ds == std::vector<long>{4, 7, 16, 19, 24, 28, 43, 123, 163, 267, 627});
}

TEST_CASE("corrupted records are rejected") {
    auto cat = cm_catalog(6);
    auto bad = cat[3];  // the b = 81/64 record
    bad.discriminant = -20;
    CHECK_THROWS_AS(verify_cm_record(bad), Error);
}

TEST_CASE("x206 verification set") {
    auto rep = x206_verify();
    CHECK(rep.all_pass());
    REQUIRE(rep.double_covers.size() == 3);
    CHECK(rep.double_covers[0] == "s^2 = -P10(r^2)");
    CHECK(rep.double_covers[1] == "s0^2 = -P10(r0)");
    CHECK(rep.double_covers[2] == "s0'^2 = -r0 P10(r0)");
    // independent oracle for the composed discriminant:
    // disc(f(x^2)) = lc(f) * (-4)^n-free identity: a * (-1)^n 4^n f(0) disc(f)^2
    PolyQ P10 = p10_polynomial();
    Rat d = poly_discriminant(P10);
    Rat d2 = poly_discriminant(P10.compose(polyq({0, 0, 1})));
    Rat oracle = Rat(P10.lc()) * Rat(int_pow(Int(4), 10)) * P10.evaluate(Rat(0)) * d * d;
    CHECK(d2 == oracle);
    // and the evaluation values themselves
    CHECK(P10.evaluate(Rat(0)) == Rat(4096));
    CHECK(P10.evaluate(Rat(1)) == Rat(77824));
    CHECK(P10.evaluate(Rat(4)) == Rat(166912));
}

TEST_CASE("height scales as n^2 under the group law on the N=57 family") {
    auto fd = build_family(57);
    Rat rv(3);
    auto S = family_at(fd, rv);
    auto cfg = fiber_configuration(S);
    auto P = section_at(fd.generic_sections[0], rv);
    Rat h1 = verify_section(S, P, &cfg).height;
    auto P2 = section_sum(S, P, P);
    REQUIRE(P2.has_value());
    CHECK(verify_section(S, *P2, &cfg).height == Rat(4) * h1);
    auto P3 = section_sum(S, *P2, P);
    REQUIRE(P3.has_value());
    CHECK(verify_section(S, *P3, &cfg).height == Rat(9) * h1);
}
