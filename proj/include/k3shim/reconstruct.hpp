// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_RECONSTRUCT_HPP
#define K3SHIM_RECONSTRUCT_HPP

#include <optional>
#include <vector>

#include "k3shim/lll.hpp"
#include "k3shim/modring.hpp"
#include "k3shim/polynomial.hpp"

namespace k3shim {

// Rational reconstruction: the unique a/b with |a|, b <= sqrt(M/2),
// gcd(b, M) = 1 and a ≡ b x (mod M), found by the half-extended Euclidean
// algorithm on (M, x).
inline std::optional<Rat> rational_reconstruct_mod(const Int& x0, const Int& M) {
    if (M <= 1) return std::nullopt;
    Int bound = isqrt(M / 2);
    if (bound == 0) return std::nullopt;
    Int x = x0 % M;
    if (x < 0) x += M;
    Int r0 = M, r1 = x;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    Int num = r1, den = t1;
    if (den == 0) return std::nullopt;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (num > bound || den > bound) return std::nullopt;
    if (int_gcd(den, M) != 1) return std::nullopt;
    if (int_gcd(num < 0 ? Int(-num) : num, den) != 1) return std::nullopt;
    // Verify the congruence (the Euclidean walk guarantees it, but cheap).
    if ((num - den * x) % M != 0) return std::nullopt;
    return make_rat(num, den);
}

inline std::optional<Rat> rational_reconstruct(const PadicScalar& x) {
    return rational_reconstruct_mod(x.residue(), x.modulus());
}

// Algebraic recognition: find a primitive integer polynomial F of degree at
// most d, of small height, with F(x) ≡ 0 mod p^k, via LLL on the lattice
// spanned by {1, x, ..., x^d} against p^k.
//
// Every zero-value-column vector of the reduced basis is a relation; the
// candidate is the gcd of the relations of minimal height (the lattice always
// contains X^j-multiples of the true minimal polynomial, all of equal
// height).  Noise is rejected by a gap margin: the best relation NOT divisible
// by the candidate must be at least p^2 times taller.  At insufficient
// precision the whole basis is noise of comparable height, so the margin
// fails and the routine reports no answer.
inline std::optional<Polynomial<Rat>> recognize_algebraic(const PadicScalar& x, unsigned d) {
    if (d < 1) raise(errc::invalid_argument, "degree bound must be >= 1");
    Int M = x.modulus();
    Int xr = x.residue() % M;
    if (xr < 0) xr += M;

    // Rows: (C * x^i, e_i) for i = 0..d, plus (C * M, 0).  C keeps the value
    // column dominant so short vectors must annihilate it exactly.
    Int C = M;
    std::size_t cols = d + 2;
    IntMatrix rows;
    Int xi = 1;
    for (unsigned i = 0; i <= d; ++i) {
        std::vector<Int> row(cols, Int(0));
        row[0] = C * xi;
        row[i + 1] = 1;
        rows.push_back(row);
        xi = (xi * xr) % M;
    }
    {
        std::vector<Int> row(cols, Int(0));
        row[0] = C * M;
        rows.push_back(row);
    }
    IntMatrix red = lll_reduce(std::move(rows));

    struct Relation {
        Polynomial<Rat> F;
        Int height;
    };
    std::vector<Relation> rels;
    for (const auto& row : red) {
        if (row[0] != 0) continue;
        std::vector<Rat> coeffs;
        Int height = 0;
        for (unsigned i = 0; i <= d; ++i) {
            coeffs.push_back(Rat(row[i + 1]));
            Int a = row[i + 1] >= 0 ? row[i + 1] : Int(-row[i + 1]);
            if (a > height) height = a;
        }
        Polynomial<Rat> F(coeffs);
        if (F.degree() < 1) continue;
        rels.push_back({std::move(F), height});
    }
    if (rels.empty()) return std::nullopt;
    std::sort(rels.begin(), rels.end(),
              [](const Relation& a, const Relation& b) { return a.height < b.height; });

    // Combine all relations within a factor p of the minimal height.
    Int cutoff = rels[0].height * x.prime();
    Polynomial<Rat> cand = rels[0].F;
    for (std::size_t i = 1; i < rels.size() && rels[i].height <= cutoff; ++i)
        cand = poly_gcd(cand, rels[i].F);
    if (cand.degree() < 1) return std::nullopt;

    // Normalize: primitive integer polynomial with positive leading coeff.
    Int den = 1;
    for (const auto& c : cand.coeffs()) den = den / int_gcd(den, c.get_den()) * c.get_den();
    cand = Rat(den) * cand;
    Int content = 0;
    for (const auto& c : cand.coeffs()) content = int_gcd(content, c.get_num());
    if (content > 1) cand = make_rat(Int(1), content) * cand;
    if (sgn(cand.lc()) < 0) cand = -cand;
    Int cand_height = 0;
    for (const auto& c : cand.coeffs()) {
        Int a = abs(c.get_num());
        if (a > cand_height) cand_height = a;
    }

    // Exact congruence F(x) ≡ 0 mod p^k.
    Int acc = 0;
    for (int i = cand.degree(); i >= 0; --i) acc = (acc * xr + cand.coeff(i).get_num()) % M;
    if (acc % M != 0) return std::nullopt;

    // Gap margin against the best relation the candidate does not divide.
    Int rival = 0;
    bool have_rival = false;
    for (const auto& r : rels) {
        auto [q, rem] = divmod(r.F, cand);
        if (rem.is_zero_poly()) continue;
        rival = r.height;
        have_rival = true;
        break;
    }
    if (have_rival && rival < cand_height * x.prime() * x.prime()) return std::nullopt;
    return cand;
}

}  // namespace k3shim

#endif
