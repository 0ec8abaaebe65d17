// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "k3shim/lattice.hpp"

using namespace k3shim;

namespace {
std::mt19937 rng(777);

std::vector<RootLattice> random_root_sum(int max_rank) {
    std::vector<RootLattice> out;
    std::uniform_int_distribution<int> kind(0, 2), an(1, 8), dn(4, 9), en(6, 8);
    int rank = 0;
    while (true) {
        int k = kind(rng);
        RootLattice l = k == 0   ? RootLattice{RootKind::A, an(rng)}
                        : k == 1 ? RootLattice{RootKind::D, dn(rng)}
                                 : RootLattice{RootKind::E, en(rng)};
        if (rank + l.n > max_rank) break;
        out.push_back(l);
        rank += l.n;
        if (out.size() >= 4) break;
    }
    if (out.empty()) out.push_back({RootKind::A, 1});
    return out;
}
}  // namespace

TEST_CASE("root lattice discriminants") {
    CHECK(root_lattice_disc({{RootKind::A, 2}, {RootKind::D, 7}, {RootKind::E, 8}}) == 12);
    CHECK(root_lattice_disc({{RootKind::A, 5}, {RootKind::A, 11}}) == 72);
    CHECK(root_lattice_disc({{RootKind::A, 2}, {RootKind::A, 4}, {RootKind::A, 10}}) == 165);
    CHECK(root_lattice_disc({{RootKind::E, 6}}) == 3);
    CHECK(root_lattice_disc({{RootKind::E, 7}}) == 2);
    CHECK(root_lattice_disc({{RootKind::D, 10}}) == 4);
}

TEST_CASE("Gram determinants match the disc formula") {
    for (int trial = 0; trial < 20; ++trial) {
        auto sum = random_root_sum(18);
        auto snf = smith_normal_form(direct_sum_gram(sum));
        Int det = 1;
        for (const auto& d : snf.diag) det *= d;
        CHECK(det == root_lattice_disc(sum));
    }
}

TEST_CASE("discriminant form of A2") {
    auto f = discriminant_form({{RootKind::A, 2}});
    REQUIRE(f.orders.size() == 1);
    CHECK(f.orders[0] == 3);
    auto classes = f.all_classes();
    REQUIRE(classes.size() == 3);
    int norm_23 = 0;
    for (const auto& [cls, q] : classes)
        if (q == make_rat(2, 3)) ++norm_23;
    CHECK(norm_23 == 2);
}

TEST_CASE("discriminant form of A6 contains a class of norm 6/7") {
    auto f = discriminant_form({{RootKind::A, 6}});
    REQUIRE(f.orders.size() == 1);
    CHECK(f.orders[0] == 7);
    bool found = false;
    for (const auto& [cls, q] : f.all_classes())
        if (q == make_rat(6, 7)) found = true;
    CHECK(found);
}

TEST_CASE("E8 has trivial discriminant group") {
    auto f = discriminant_form({{RootKind::E, 8}});
    CHECK(f.orders.empty());
    CHECK(f.group_order() == 1);
}

TEST_CASE("discriminant group order and q denominators") {
    for (int trial = 0; trial < 12; ++trial) {
        auto sum = random_root_sum(18);
        auto f = discriminant_form(sum);
        Int disc = root_lattice_disc(sum);
        CHECK(f.group_order() == disc);
        for (const auto& [cls, q] : f.all_classes()) {
            Rat scaled = q * Rat(disc);
            CHECK(scaled.get_den() == 1);
        }
    }
}

TEST_CASE("A_n discriminant form matches the fiber-contribution values") {
    // Norm multiset of A_n classes = { i(n+1-i)/(n+1) mod 2Z : i }.
    for (int n : {1, 2, 3, 5, 6, 11}) {
        auto f = discriminant_form({{RootKind::A, n}});
        std::vector<Rat> got, expect;
        for (const auto& [cls, q] : f.all_classes()) got.push_back(q);
        for (int i = 0; i <= n; ++i) {
            Rat q = make_rat(static_cast<long>(i) * (n + 1 - i), n + 1);
            // reduce mod 2
            Int num = q.get_num() % (2 * q.get_den());
            expect.push_back(make_rat(num, q.get_den()));
        }
        std::sort(got.begin(), got.end());
        std::sort(expect.begin(), expect.end());
        CHECK(got == expect);
    }
}

TEST_CASE("L_N conditions for the three case-study lattices") {
    // N = 6, R = A2 + D7 + E8: pass at p = 3 with witness 2.
    auto r6 = check_ln_conditions(6, {{RootKind::A, 2}, {RootKind::D, 7}, {RootKind::E, 8}});
    CHECK(r6.disc_ok);
    CHECK(r6.all_pass());
    REQUIRE(r6.verdicts.size() == 1);
    CHECK(r6.verdicts[0].p == 3);
    CHECK(r6.verdicts[0].witness_c == 2);

    // N = 14, R = A3 + A6 + E8: pass at p = 7 with witness 6.
    auto r14 = check_ln_conditions(14, {{RootKind::A, 3}, {RootKind::A, 6}, {RootKind::E, 8}});
    CHECK(r14.all_pass());
    REQUIRE(r14.verdicts.size() == 1);
    CHECK(r14.verdicts[0].p == 7);
    CHECK(r14.verdicts[0].witness_c == 6);

    // N = 57, R = A5 + A11 with the height-19/12 glue (components 3 and 1):
    // pass at p = 3 with witness 4; p = 19 is automatic for odd N.
    GlueSection glue{4, {3, 1}};
    auto r57 = check_ln_conditions(57, {{RootKind::A, 5}, {RootKind::A, 11}}, glue);
    CHECK(r57.disc_found == 114);
    CHECK(r57.all_pass());
    REQUIRE(r57.verdicts.size() == 2);
    CHECK(r57.verdicts[0].p == 3);
    CHECK(r57.verdicts[0].witness_c == 4);
    CHECK(r57.verdicts[1].p == 19);
    CHECK(r57.verdicts[1].skipped);
}

TEST_CASE("perturbed glue flips a verdict or the discriminant check") {
    GlueSection bad{4, {2, 1}};
    bool flipped = false;
    try {
        auto rep = check_ln_conditions(57, {{RootKind::A, 5}, {RootKind::A, 11}}, bad);
        flipped = !rep.all_pass();
    } catch (const Error& e) {
        flipped = e.code() == errc::wrong_discriminant;
    }
    CHECK(flipped);
}

TEST_CASE("wrong discriminant is rejected") {
    CHECK_THROWS_AS(check_ln_conditions(6, {{RootKind::A, 2}, {RootKind::A, 4}}), Error);
}
