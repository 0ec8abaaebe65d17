// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_RATIONAL_HPP
#define K3SHIM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3shim/errors.hpp"

namespace k3shim {

// Exact scalars.  Int is an arbitrary-precision integer, Rat a canonical
// fraction (gcd(num, den) = 1, den >= 1); both are GMP-backed.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) raise(errc::invalid_argument, "zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

// ---- generic ring-element hooks -------------------------------------------
//
// The polynomial/series templates obtain ring constants through zero_like /
// one_like so that types carrying runtime context (a modulus, a defining
// polynomial) can participate.  For plain value types these ignore the sample.

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline bool is_zero(const Rat& x) { return sgn(x) == 0; }
inline Rat inv(const Rat& x) {
    if (is_zero(x)) raise(errc::invalid_argument, "division by zero");
    return Rat(1) / x;
}

inline Int zero_like(const Int&) { return Int(0); }
inline Int one_like(const Int&) { return Int(1); }
inline bool is_zero(const Int& x) { return sgn(x) == 0; }

// ---- integer helpers -------------------------------------------------------

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n) {
    return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_probable_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0; }

// Exact rational square root when one exists.
inline std::optional<Rat> rat_sqrt(const Rat& x) {
    if (sgn(x) < 0) return std::nullopt;
    if (!is_perfect_square(x.get_num()) || !is_perfect_square(x.get_den())) return std::nullopt;
    return make_rat(isqrt(x.get_num()), isqrt(x.get_den()));
}

inline std::optional<Rat> field_sqrt(const Rat& x) { return rat_sqrt(x); }

// Legendre symbol (a/p) for an odd prime p.
inline int legendre_symbol(const Int& a, const Int& p) {
    if (p <= 2 || !is_probable_prime(p)) raise(errc::invalid_prime, "p must be an odd prime");
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

inline int legendre_symbol(long a, long p) { return legendre_symbol(Int(a), Int(p)); }

// Trial-division factorization; returns prime factors found up to `bound`
// (with multiplicity) and whatever cofactor is left over.
struct PartialFactorization {
    std::vector<std::pair<Int, unsigned>> factors;
    Int cofactor;  // 1 when fully factored
};

inline PartialFactorization factor_trial(Int n, unsigned long bound = 1000000) {
    PartialFactorization out;
    out.cofactor = 1;
    if (sgn(n) < 0) n = -n;
    if (n == 0 || n == 1) {
        out.cofactor = n;
        return out;
    }
    auto strip = [&](const Int& p) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e) out.factors.emplace_back(p, e);
    };
    strip(Int(2));
    Int p = 3;
    while (p * p <= n && p <= Int(static_cast<unsigned long>(bound))) {
        strip(p);
        p += 2;
    }
    if (n > 1) {
        if (is_probable_prime(n))
            out.factors.emplace_back(n, 1);
        else
            out.cofactor = n;
    }
    return out;
}

// All positive divisors assembled from a partial factorization (the leftover
// cofactor is ignored; callers that need completeness must check it is 1).
inline std::vector<Int> divisors_from(const PartialFactorization& f, std::size_t cap = 1 << 20) {
    std::vector<Int> divs{Int(1)};
    for (const auto& [p, e] : f.factors) {
        std::size_t n = divs.size();
        Int pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < n; ++j) {
                divs.push_back(divs[j] * pk);
                if (divs.size() > cap) raise(errc::internal_error, "divisor list too large");
            }
        }
    }
    return divs;
}

inline std::string rat_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) raise(errc::invalid_argument, "bad rational literal: " + s);
    r.canonicalize();
    return r;
}

}  // namespace k3shim

#endif
