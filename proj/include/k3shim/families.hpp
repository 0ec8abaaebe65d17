// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_FAMILIES_HPP
#define K3SHIM_FAMILIES_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3shim/heights.hpp"
#include "k3shim/series.hpp"
#include "k3shim/surface.hpp"
#include "k3shim/tate.hpp"

namespace k3shim {

// One parametrized K3 family (levels 6, 14, 57), presented symbolically over
// Q(parameter) together with its generic fiber data and generic sections.
struct FamilyDescriptor {
    long level = 0;
    std::string parameter;                      // "b" or "r"
    SurfaceModel<RatFn> symbolic;               // over Q(parameter)
    std::vector<RootLattice> generic_roots;
    std::vector<Section<RatFn>> generic_sections;
    std::vector<long> bad_primes;               // excluded from mod-p work
};

namespace family_detail {

inline RatFn C(long n) { return RatFn(n); }

inline Polynomial<RatFn> pr(std::vector<RatFn> v) { return Polynomial<RatFn>(std::move(v)); }

}  // namespace family_detail

// Level 6: Y^2 = X^3 + t X^2 + 2b t^3 (t-1) X + b^2 t^5 (t-1)^2, parameter b.
inline FamilyDescriptor build_family_n6() {
    using namespace family_detail;
    RatFn b = RatFn::variable();
    FamilyDescriptor fd;
    fd.level = 6;
    fd.parameter = "b";
    auto a = pr({C(0), C(1)});
    auto B = pr({C(0), C(0), C(0), C(-2) * b, C(2) * b});
    auto Cc = pr({C(0), C(0), C(0), C(0), C(0), b * b, C(-2) * b * b, b * b});
    fd.symbolic = SurfaceModel<RatFn>::make_extended(a, B, Cc);
    fd.generic_roots = {{RootKind::A, 2}, {RootKind::D, 7}, {RootKind::E, 8}};
    fd.bad_primes = {2, 3};
    return fd;
}

// Level 14: the A3 + A6 + E8 family with the A3 fiber at t = 2r + 1.
inline FamilyDescriptor build_family_n14() {
    using namespace family_detail;
    RatFn r = RatFn::variable();
    FamilyDescriptor fd;
    fd.level = 14;
    fd.parameter = "r";
    RatFn r2 = r * r, r3 = r2 * r, r4 = r3 * r, r6 = r4 * r2;
    auto a = pr({r6, C(3) * r4 + C(4) * r3 + C(2) * r2, (r + C(1)) * (r + C(1))});
    // b = 2 (r+1)^2 ((2r^2+2r+1) t + r^4) (t - (2r+1)) t^2
    auto lin1 = pr({r4, C(2) * r2 + C(2) * r + C(1)});
    auto lin2 = pr({-(C(2) * r + C(1)), C(1)});
    auto b = (C(2) * (r + C(1)) * (r + C(1))) * lin1 * lin2 * pr({C(0), C(0), C(1)});
    // c = (r+1)^4 (t - (2r+1))^2 (t + r^2) t^4
    auto c = ((r + C(1)).pow(4)) * lin2 * lin2 * pr({r2, C(1)}) *
             pr({C(0), C(0), C(0), C(0), C(1)});
    fd.symbolic = SurfaceModel<RatFn>::make_extended(a, b, c);
    fd.generic_roots = {{RootKind::A, 3}, {RootKind::A, 6}, {RootKind::E, 8}};
    fd.bad_primes = {2, 3, 5, 7, 11};
    return fd;
}

// Level 57: the A5 + A11 family with its height-19/12 generic section.
inline FamilyDescriptor build_family_n57() {
    using namespace family_detail;
    RatFn r = RatFn::variable();
    FamilyDescriptor fd;
    fd.level = 57;
    fd.parameter = "r";
    RatFn one = C(1);
    RatFn r2 = r * r;
    RatFn p = C(4) * (r - one) * (r2 - C(2)) + one;
    RatFn tr = C(2) * r - one;  // 2r - 1
    RatFn e = r2 - C(2) * r;    // r^2 - 2r
    // d = (r^2-1)^2 (9 t + (2r-1) p)
    auto d = ((r2 - one) * (r2 - one)) * pr({tr * p, C(9)});
    // c = 9 t^2 - (2r-1)(8r^2+4r-22) t + (2r-1)^2 p
    auto c = pr({tr * tr * p, -tr * (C(8) * r2 + C(4) * r - C(22)), C(9)});
    // b = (t - e) c + d
    auto b = pr({-e, C(1)}) * c + d;
    // a = (t - e)^2 c + 2 (t - e) d + (r^2-1)^4 ((4r+4) t + p)
    auto a = pr({-e, C(1)}) * pr({-e, C(1)}) * c + C(2) * pr({-e, C(1)}) * d +
             ((r2 - one).pow(4)) * pr({p, C(4) * r + C(4)});
    RatFn u4 = (r - one).pow(4), u5 = (r + one).pow(5);
    auto Bc = (C(8) * u4 * u5) * b * pr({C(0), C(0), C(1)});
    auto Cc = (C(16) * u4 * u4 * u5 * u5) * c * pr({C(0), C(0), C(0), C(0), C(1)});
    fd.symbolic = SurfaceModel<RatFn>::make_extended(a, Bc, Cc);
    fd.generic_roots = {{RootKind::A, 5}, {RootKind::A, 11}};
    fd.bad_primes = {2, 3, 5, 7, 11, 19};
    // The generic section: X = -4(r-1)^4 (r+1)^5 (2r-1) t^2 / (r^2-r+1)^2
    //                        + 4(r-2)(r+1)^4 t^3 / (r^2-r+1).
    RatFn q1 = r2 - r + one;
    RatFn x2 = C(-4) * u4 * u5 * tr * inv(q1 * q1);
    RatFn x3 = C(4) * (r - C(2)) * (r + one).pow(4) * inv(q1);
    RationalFunction<RatFn> X(pr({C(0), C(0), x2, x3}));
    // Y from the surface equation; the right-hand side is an exact square.
    RationalFunction<RatFn> rhs =
        X * X * X + RationalFunction<RatFn>(a) * X * X +
        RationalFunction<RatFn>(Bc) * X + RationalFunction<RatFn>(Cc);
    auto Y = field_sqrt(rhs);
    if (!Y) raise(errc::internal_error, "generic level-57 section is not on the surface");
    fd.generic_sections.push_back({X, *Y});
    return fd;
}

inline FamilyDescriptor build_family(long N) {
    switch (N) {
        case 6: return build_family_n6();
        case 14: return build_family_n14();
        case 57: return build_family_n57();
        default: raise(errc::invalid_argument, "no family builder for this level");
    }
}

inline SurfaceModel<Rat> family_at(const FamilyDescriptor& fd, const Rat& value) {
    return specialize(fd.symbolic, value);
}

inline Section<Rat> section_at(const Section<RatFn>& s, const Rat& value) {
    auto eval_poly = [&](const Polynomial<RatFn>& p) {
        std::vector<Rat> c;
        for (int i = 0; i <= p.degree(); ++i) {
            const RatFn cf = p.coeff(i);
            Rat den = cf.den().evaluate(value);
            if (is_zero(den)) raise(errc::needs_renormalization, "section pole at value");
            c.push_back(cf.num().evaluate(value) / den);
        }
        return Polynomial<Rat>(std::move(c));
    };
    return Section<Rat>{RatFn(eval_poly(s.X.num()), eval_poly(s.X.den())),
                        RatFn(eval_poly(s.Y.num()), eval_poly(s.Y.den()))};
}

// Atkin-Lehner-induced involution on the printed parameter-line coordinates.
// nullopt encodes the point at infinity of the parameter line.
inline std::optional<Rat> involution(long N, const Rat& value) {
    switch (N) {
        case 6:
        case 206:
            return -value;  // r -> -r
        case 14: {
            // r -> -r / (2r + 1)
            Rat den = Rat(2) * value + Rat(1);
            if (is_zero(den)) return std::nullopt;
            return -value / den;
        }
        case 57:
            // the printed coordinate is on the full quotient; no involution
            // remains on it
            return value;
        default:
            raise(errc::invalid_argument, "no involution data for this level");
    }
}

// ---- the level-6 boundary charts ---------------------------------------------

enum class N6Chart { near_zero, near_infinity };

// near_zero: b = beta^4 and (t, X, Y) -> (t/beta^2, X/beta^2, Y/beta^3):
//   Y^2 = X^3 + t X^2 + 2 t^3 (t - beta^2) X + t^5 (t - beta^2)^2.
// near_infinity: b = 1/beta^3 and (X, Y) -> (X/beta^2, Y/beta^3):
//   Y^2 = X^3 + beta^2 t X^2 + 2 beta t^3 (t-1) X + t^5 (t-1)^2.
inline SurfaceModel<Rat> n6_chart(N6Chart which, const Rat& beta) {
    Rat b2 = beta * beta;
    if (which == N6Chart::near_zero) {
        auto a = polyq({0, 1});
        PolyQ B{Rat(0), Rat(0), Rat(0), Rat(-2) * b2, Rat(2)};
        PolyQ C2 = PolyQ{-b2, Rat(1)} * PolyQ{-b2, Rat(1)};
        PolyQ C = C2 * PolyQ::monomial(Rat(1), 5);
        return SurfaceModel<Rat>::make_extended(a, B, C);
    }
    PolyQ a{Rat(0), b2};
    PolyQ B = Rat(2) * beta * (PolyQ::monomial(Rat(1), 4) - PolyQ::monomial(Rat(1), 3));
    PolyQ C = PolyQ{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1), Rat(-2), Rat(1)};
    return SurfaceModel<Rat>::make_extended(a, B, C);
}

// ---- the level-6 square-section derivation -----------------------------------

struct SquareSectionN6 {
    Rat b;                 // 81/64
    Rat t1;                // -9
    PolyQ square_root;     // 27 t^2 - 18 t - 1 (positive leading coefficient)
    PolyQ quartic_at_root; // its square
};

// Reproduces the derivation of the discriminant -19 point on the level-6
// family: substitute the section shape X = b (t^2 - t^3)(1 + t1 t), strip the
// forced square factor, demand that the remaining quartic in t be a perfect
// square by killing two Taylor coefficients of its square root, and eliminate
// t1 by a resultant.
inline SquareSectionN6 solve_square_section_n6() {
    using F = RatFn;                    // Q(b)
    using G = RationalFunction<F>;      // Q(b)(t1)
    using PT = Polynomial<G>;
    F b = F::variable();
    G t1 = G::variable();
    G bb(b), zg(0), og(1);

    // X = b (t^2 - t^3)(1 + t1 t) on Y^2 = X^3 + tX^2 + 2b t^3(t-1) X + b^2 t^5 (t-1)^2.
    PT X = bb * PT({zg, zg, og, -og}) * PT({og, t1});
    PT t = PT({zg, og});
    PT rhs = X * X * X + t * X * X + (G(2) * bb) * PT({zg, zg, zg, -og, og}) * X +
             (bb * bb) * PT({zg, zg, zg, zg, zg, og, G(-2), og});
    PT div = PT({zg, zg, zg, -og, og});
    div = div * div;
    auto [quotient, rem] = divmod(rhs, div);
    if (!rem.is_zero_poly()) raise(errc::computation_mismatch, "square factor does not divide");
    // quotient = b^3 * quartic
    PT quartic = inv(bb * bb * bb) * quotient;
    if (quartic.degree() != 4) raise(errc::computation_mismatch, "expected a quartic");
    // Sanity: the constant term is 1.
    if (!(quartic.coeff(0) == og)) raise(errc::computation_mismatch, "constant term not 1");

    // Taylor square root about t = 0 to order 5; kill the t^3, t^4 terms.
    std::vector<G> qc;
    for (int i = 0; i <= 4; ++i) qc.push_back(quartic.coeff(i));
    auto series = TruncatedSeries<G>::at_zero(qc, 5);
    auto sq = series_sqrt(series);
    G e3 = sq.coeff(3), e4 = sq.coeff(4);

    // Numerators as polynomials in t1 over Q(b); eliminate t1.
    auto n3 = e3.num();
    auto n4 = e4.num();
    F res = resultant(n3, n4);
    PolyQ res_num = res.num();
    // Strip the spurious b-power (the multiple solution at b = 0).
    {
        std::vector<Rat> c(res_num.coeffs());
        std::size_t k = 0;
        while (k < c.size() && is_zero(c[k])) ++k;
        res_num = PolyQ(std::vector<Rat>(c.begin() + k, c.end()));
    }
    auto roots = rational_roots(res_num);
    std::optional<Rat> broot;
    for (const auto& rt : roots.roots)
        if (!is_zero(rt)) broot = rt;
    if (!broot) raise(errc::computation_mismatch, "no nonzero rational b root");

    // Back-substitute to find t1.
    auto eval_b = [&](const Polynomial<F>& p) {
        std::vector<Rat> c;
        for (int i = 0; i <= p.degree(); ++i) {
            const F cf = p.coeff(i);
            c.push_back(cf.num().evaluate(*broot) / cf.den().evaluate(*broot));
        }
        return PolyQ(std::move(c));
    };
    PolyQ g = poly_gcd(eval_b(n3), eval_b(n4));
    auto t1_roots = rational_roots(g);
    if (t1_roots.roots.size() != 1)
        raise(errc::computation_mismatch, "t1 not uniquely determined");
    Rat t1val = t1_roots.roots[0];

    // Verify the quartic is a perfect square at (b, t1).
    std::vector<Rat> qv;
    for (int i = 0; i <= 4; ++i) {
        const G cf = quartic.coeff(i);
        auto evalG = [&](const Polynomial<F>& p) {
            std::vector<Rat> c;
            for (int j = 0; j <= p.degree(); ++j) {
                const F inner = p.coeff(j);
                c.push_back(inner.num().evaluate(*broot) / inner.den().evaluate(*broot));
            }
            return PolyQ(std::move(c)).evaluate(t1val);
        };
        qv.push_back(evalG(cf.num()) / evalG(cf.den()));
    }
    PolyQ quartic_q(qv);
    auto root = poly_sqrt(quartic_q);
    if (!root) raise(errc::computation_mismatch, "quartic is not a square at the solution");
    PolyQ sqroot = sgn(root->lc()) > 0 ? *root : -(*root);
    return {*broot, t1val, sqroot, quartic_q};
}

}  // namespace k3shim

#endif
