// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_SEARCH_HPP
#define K3SHIM_SEARCH_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "k3shim/catalog.hpp"
#include "k3shim/families.hpp"
#include "k3shim/modring.hpp"
#include "k3shim/reconstruct.hpp"

namespace k3shim {

// ---- small-prime polynomial kernel -------------------------------------------
//
// The exhaustive scans work over F_p for p < 100, so the hot loops run on
// int64 coefficient vectors instead of the generic tower types.

namespace fp {

using Poly = std::vector<int64_t>;  // ascending, not normalized

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly add(const Poly& a, const Poly& b, int64_t p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        int64_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        c[i] = v % p;
    }
    trim(c);
    return c;
}

inline Poly mul(const Poly& a, const Poly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    trim(c);
    return c;
}

inline Poly scale(const Poly& a, int64_t s, int64_t p) {
    Poly c = a;
    for (auto& x : c) x = (x * (s % p)) % p;
    trim(c);
    return c;
}

inline int64_t powmod(int64_t b, int64_t e, int64_t p) {
    int64_t r = 1;
    b %= p;
    if (b < 0) b += p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline int64_t invmod(int64_t a, int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (!a) raise(errc::internal_error, "inverse of zero mod p");
    return powmod(a, p - 2, p);
}

inline int64_t eval(const Poly& a, int64_t x, int64_t p) {
    int64_t r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return r < 0 ? r + p : r;
}

// chi table: chi[x] = 1, 0, -1
inline std::vector<int> legendre_table(int64_t p) {
    std::vector<int> chi(p, -1);
    chi[0] = 0;
    for (int64_t x = 1; x < p; ++x) chi[x * x % p] = 1;
    return chi;
}

// Exact square test with square root extraction (top-down coefficient solve,
// early exit on the verification sweep).
inline bool is_square(const Poly& f, int64_t p, const std::vector<int>& chi) {
    if (f.empty()) return true;
    int d = static_cast<int>(f.size()) - 1;
    if (d % 2) return false;
    int m = d / 2;
    if (chi[f.back() < 0 ? f.back() + p : f.back()] != 1) return false;
    // find sqrt of leading coefficient
    int64_t lc = f.back() % p;
    if (lc < 0) lc += p;
    int64_t s = 0;
    for (int64_t x = 1; x < p; ++x)
        if (x * x % p == lc) {
            s = x;
            break;
        }
    Poly g(m + 1, 0);
    g[m] = s;
    int64_t inv2g = invmod(2 * s % p, p);
    for (int k = m - 1; k >= 0; --k) {
        // match coefficient of t^(m+k)
        int64_t acc = (m + k) < static_cast<int>(f.size()) ? f[m + k] : 0;
        for (int i = k + 1; i < m + 1; ++i) {
            int j = m + k - i;
            if (j <= k || j > m) continue;
            if (j < i) continue;  // count unordered pairs once
            int64_t term = g[i] * g[j] % p;
            acc -= (i == j) ? term : 2 * term;
        }
        acc %= p;
        g[k] = acc * inv2g % p;
        if (g[k] < 0) g[k] += p;
    }
    // verification sweep over the low half
    for (int k = 0; k < m; ++k) {
        int64_t acc = 0;
        for (int i = 0; i <= k; ++i) acc = (acc + g[i] * g[k - i]) % p;
        int64_t want = k < static_cast<int>(f.size()) ? f[k] % p : 0;
        if ((acc - want) % p != 0) return false;
    }
    return true;
}

// Strip t^v; returns false if the valuation is odd or exceeds the polynomial.
inline bool strip_even_valuation(Poly& f) {
    std::size_t v = 0;
    while (v < f.size() && f[v] == 0) ++v;
    if (v == f.size()) return true;  // zero
    if (v % 2) return false;
    f.erase(f.begin(), f.begin() + v);
    return true;
}

}  // namespace fp

// ---- search specification ------------------------------------------------------

struct SearchSpec {
    long level = 0;
    long discriminant = 0;  // D < 0
    std::optional<long> prime_override;
    long initial_precision = 8;
    long max_precision = 4096;
    int threads = 1;
};

struct ModPCandidate {
    long p = 0;
    std::vector<long> residues;   // the unknown vector mod p (parameter first)
    long point_count = 0;         // Weierstrass count of the candidate surface
};

// ---- prime selection -------------------------------------------------------------

// Smallest odd prime of good reduction at which the (negative) CM
// discriminant is a quadratic residue, so reduction mod p does not raise the
// Picard number.
inline long choose_prime(long D, const FamilyDescriptor& fd) {
    if (D >= 0) raise(errc::invalid_argument, "discriminant must be negative");
    for (long p = 3;; p += 2) {
        if (!is_probable_prime(Int(p))) continue;
        if (std::find(fd.bad_primes.begin(), fd.bad_primes.end(), p) != fd.bad_primes.end())
            continue;
        if (legendre_symbol(Int(D), Int(p)) == 1) return p;
        if (p > 1000) raise(errc::not_found, "no usable prime below 1000");
    }
}

// ---- point counting ---------------------------------------------------------------

// Weierstrass point count of a surface over F_p: the sum over t in P^1(F_p)
// of the affine count of Y^2 = X^3 + a X^2 + b X + c plus one point at
// infinity per fiber; singular fibers are counted on the (unresolved)
// Weierstrass cubic.
inline long count_points_mod_p(const SurfaceModel<Rat>& S, long p) {
    if (p < 3) raise(errc::invalid_argument, "odd p required");
    auto sf = to_short_form(S);
    auto reduce = [&](const PolyQ& f) {
        fp::Poly out;
        for (int i = 0; i <= f.degree(); ++i) {
            const Rat& c = f.coeff(i);
            if (c.get_den() % p == 0) raise(errc::bad_reduction, "p divides a denominator");
            int64_t num = static_cast<int64_t>(mpz_fdiv_ui(c.get_num().get_mpz_t(), p));
            int64_t den = static_cast<int64_t>(mpz_fdiv_ui(c.get_den().get_mpz_t(), p));
            out.push_back(num * fp::invmod(den, p) % p);
        }
        fp::trim(out);
        return out;
    };
    fp::Poly A = reduce(sf.model.A());
    fp::Poly B = reduce(sf.model.B());
    // good reduction: Delta != 0 mod p
    {
        fp::Poly a3 = fp::mul(fp::mul(A, A, p), A, p);
        fp::Poly b2 = fp::mul(B, B, p);
        fp::Poly delta = fp::add(fp::scale(a3, 4, p), fp::scale(b2, 27, p), p);
        if (delta.empty()) raise(errc::bad_reduction, "discriminant vanishes mod p");
    }
    auto chi = fp::legendre_table(p);
    long total = 0;
    auto fiber_count = [&](int64_t a, int64_t b) {
        long n = 1;  // point at infinity
        for (int64_t x = 0; x < p; ++x) {
            int64_t v = ((x * x % p * x + a * x + b) % p + p) % p;
            n += 1 + chi[v];
        }
        return n;
    };
    for (int64_t t = 0; t < p; ++t) total += fiber_count(fp::eval(A, t, p), fp::eval(B, t, p));
    // t = infinity: reverse chart u = 0
    fp::Poly Ar(A), Br(B);
    {
        // u^8 A(1/u), u^12 B(1/u) evaluated at u = 0: the degree-8/12 tops.
        int64_t atop = A.size() == 9 ? A[8] : 0;
        int64_t btop = B.size() == 13 ? B[12] : 0;
        total += fiber_count(atop % p, btop % p);
        (void)Ar;
        (void)Br;
    }
    return total;
}

// ---- per-level scans ---------------------------------------------------------------

namespace search_detail {

// Reduce the symbolic family mod p at parameter residue r; the coefficient
// polynomials of the extended form become int64 vectors.
struct FamilyModP {
    fp::Poly a, B, C;
    bool good = true;
};

inline FamilyModP family_mod_p(const FamilyDescriptor& fd, int64_t r, int64_t p) {
    FamilyModP out;
    auto eval_coeff = [&](const RatFn& c) -> std::optional<int64_t> {
        auto ev = [&](const PolyQ& f) -> std::optional<int64_t> {
            int64_t acc = 0;
            for (int i = f.degree(); i >= 0; --i) {
                const Rat& x = f.coeff(i);
                if (x.get_den() % p == 0) return std::nullopt;
                int64_t num = static_cast<int64_t>(mpz_fdiv_ui(x.get_num().get_mpz_t(), p));
                int64_t den = static_cast<int64_t>(mpz_fdiv_ui(x.get_den().get_mpz_t(), p));
                acc = (acc * r + num * fp::invmod(den, p)) % p;
            }
            return acc;
        };
        auto n = ev(c.num()), d = ev(c.den());
        if (!n || !d || *d == 0) return std::nullopt;
        return *n * fp::invmod(*d, p) % p;
    };
    auto conv = [&](const Polynomial<RatFn>& poly, fp::Poly& dst) {
        for (int i = 0; i <= poly.degree(); ++i) {
            auto v = eval_coeff(poly.coeff(i));
            if (!v) {
                out.good = false;
                return;
            }
            dst.push_back(*v);
        }
        fp::trim(dst);
    };
    conv(fd.symbolic.coeffs[0], out.a);
    if (out.good) conv(fd.symbolic.coeffs[1], out.B);
    if (out.good) conv(fd.symbolic.coeffs[2], out.C);
    return out;
}

// The cubic g(X) = X^3 + a X^2 + B X + C evaluated at a polynomial X(t),
// as an int64 polynomial in t.
inline fp::Poly surface_rhs(const FamilyModP& fm, const fp::Poly& X, int64_t p) {
    fp::Poly X2 = fp::mul(X, X, p);
    fp::Poly X3 = fp::mul(X2, X, p);
    fp::Poly out = fp::add(X3, fp::mul(fm.a, X2, p), p);
    out = fp::add(out, fp::mul(fm.B, X, p), p);
    out = fp::add(out, fm.C, p);
    return out;
}

}  // namespace search_detail

// Level 6, discriminant -19 shape: X = b (t^2 - t^3)(1 + t1 t); the square
// condition after the forced factor is a quartic whose Taylor square root
// must have vanishing t^3, t^4 coefficients.  For each residue b the two
// coefficient equations are univariate in t1 over F_p and solved by gcd
// root-finding.
inline std::vector<ModPCandidate> scan_n6(long p) {
    std::vector<ModPCandidate> out;
    auto chi = fp::legendre_table(p);
    (void)chi;
    for (int64_t b = 1; b < p; ++b) {
        // quartic coefficients in t as polynomials in t1 (from the closed form):
        // q4 = -t1^3, q3 = t1^3 - 3 t1^2, q2 = 3(t1^2 - t1),
        // q1 = (3 t1 - 1) + t1^2 / b, q0 = 1.
        // Square-root Taylor coefficients s3, s4 as polynomials in t1 are
        // rebuilt per t1 value (p is tiny).
        std::vector<long> sols;
        for (int64_t t1 = 0; t1 < p; ++t1) {
            int64_t binv = fp::invmod(b, p);
            int64_t q4 = (p - t1 * t1 % p * t1 % p) % p;
            int64_t q3 = ((t1 * t1 % p * t1 - 3 * t1 * t1) % p + p) % p;
            int64_t q2 = ((3 * (t1 * t1 - t1)) % p + p) % p;
            int64_t q1 = (((3 * t1 - 1) + t1 * t1 % p * binv) % p + p) % p;
            // sqrt series of 1 + q1 t + q2 t^2 + q3 t^3 + q4 t^4
            int64_t inv2 = fp::invmod(2, p);
            int64_t s1 = q1 * inv2 % p;
            int64_t s2 = ((q2 - s1 * s1) % p + p) % p * inv2 % p;
            int64_t s3 = ((q3 - 2 * s1 * s2 % p) % p + p) % p * inv2 % p;
            int64_t s4 = ((q4 - 2 * s1 * s3 % p - s2 * s2 % p) % p + p) % p * inv2 % p;
            if (s3 == 0 && s4 == 0) sols.push_back(static_cast<long>(t1));
        }
        for (long t1 : sols) out.push_back({p, {static_cast<long>(b), t1}, 0});
    }
    return out;
}

// Level 14, discriminant -67 shape: X = t (t - (2r+1)) (x0 + x1 t + x2 t^2);
// strip t^2 (t-(2r+1))^2 from the right-hand side and require the degree-8
// remainder to be a perfect square.
inline std::vector<ModPCandidate> scan_n14(const FamilyDescriptor& fd, long p) {
    std::vector<ModPCandidate> out;
    auto chi = fp::legendre_table(p);
    for (int64_t r = 0; r < p; ++r) {
        auto fm = search_detail::family_mod_p(fd, r, p);
        if (!fm.good) continue;
        int64_t root2 = (2 * r + 1) % p;
        fp::Poly base = fp::mul({0, 1}, {static_cast<int64_t>((p - root2) % p), 1}, p);
        for (int64_t x0 = 0; x0 < p; ++x0)
            for (int64_t x1 = 0; x1 < p; ++x1)
                for (int64_t x2 = 0; x2 < p; ++x2) {
                    if (x2 == 0) continue;  // X must have degree 4
                    fp::Poly X = fp::mul(base, {x0, x1, x2}, p);
                    fp::Poly G = search_detail::surface_rhs(fm, X, p);
                    // strip t^2 (t - root2)^2 exactly
                    if (!fp::strip_even_valuation(G)) continue;
                    if (G.empty()) continue;
                    // divide by (t - root2)^2: evaluate-and-deflate twice
                    bool ok = true;
                    for (int k = 0; k < 2 && ok; ++k) {
                        if (fp::eval(G, root2, p) != 0) {
                            ok = false;
                            break;
                        }
                        // synthetic division
                        fp::Poly Q(G.size() - 1, 0);
                        int64_t carry = 0;
                        for (std::size_t i = G.size(); i-- > 1;) {
                            carry = (carry * root2 + G[i]) % p;
                            Q[i - 1] = carry;
                        }
                        G = Q;
                        fp::trim(G);
                    }
                    if (!ok || G.empty()) continue;
                    if (fp::is_square(G, p, chi))
                        out.push_back({p,
                                       {static_cast<long>(r), static_cast<long>(x0),
                                        static_cast<long>(x1), static_cast<long>(x2)},
                                       0});
                }
    }
    return out;
}

// Level 57, polynomial shape (discriminant -267): X = t^2 (x0 + x1 t + x2 t^2).
inline std::vector<ModPCandidate> scan_n57_poly(const FamilyDescriptor& fd, long p) {
    std::vector<ModPCandidate> out;
    auto chi = fp::legendre_table(p);
    for (int64_t r = 0; r < p; ++r) {
        auto fm = search_detail::family_mod_p(fd, r, p);
        if (!fm.good) continue;
        for (int64_t x0 = 0; x0 < p; ++x0)
            for (int64_t x1 = 0; x1 < p; ++x1)
                for (int64_t x2 = 1; x2 < p; ++x2) {  // X of degree exactly 4
                    fp::Poly X = {0, 0, x0, x1, x2};
                    fp::Poly G = search_detail::surface_rhs(fm, X, p);
                    if (!fp::strip_even_valuation(G)) continue;
                    if (G.empty()) continue;
                    if (fp::is_square(G, p, chi))
                        out.push_back({p,
                                       {static_cast<long>(r), static_cast<long>(x0),
                                        static_cast<long>(x1), static_cast<long>(x2)},
                                       0});
                }
    }
    return out;
}

// Level 57, pole shape (discriminant -627): X = t^2 q(t) / D(t)^2 with q of
// degree 5 and D a monic cubic.  The lattice data pins four of the q
// coefficients linearly (far A5 component at t=0; sixth-order contact with
// the node branch of the A11 at infinity), leaving a p^5 loop.
inline std::vector<ModPCandidate> scan_n57_pole(const FamilyDescriptor& fd, long p,
                                                int threads = 1);

inline std::vector<ModPCandidate> scan_n57_pole_range(const FamilyDescriptor& fd, long p,
                                                      int64_t r_lo, int64_t r_hi) {
    std::vector<ModPCandidate> out;
    auto chi = fp::legendre_table(p);
    for (int64_t r = r_lo; r < r_hi; ++r) {
        auto fm = search_detail::family_mod_p(fd, r, p);
        if (!fm.good) continue;
        if (fm.a.empty() || fp::eval(fm.a, 0, p) == 0) continue;
        // node-center series at t = 0 of 3X^2 + 2aX + B: Newton in F_p[[t]].
        auto series_of = [&](const fp::Poly& f, int n) {
            fp::Poly s(f.begin(), f.begin() + std::min<std::size_t>(f.size(), n));
            s.resize(n, 0);
            return s;
        };
        const int prec0 = 4, precI = 7;
        auto smul = [&](const fp::Poly& x, const fp::Poly& y, int n) {
            fp::Poly c(n, 0);
            for (int i = 0; i < n && i < static_cast<int>(x.size()); ++i) {
                if (!x[i]) continue;
                for (int j = 0; i + j < n && j < static_cast<int>(y.size()); ++j)
                    c[i + j] = (c[i + j] + x[i] * y[j]) % p;
            }
            return c;
        };
        auto sdiv_unit = [&](const fp::Poly& x, const fp::Poly& y, int n) {
            fp::Poly c(n, 0);
            int64_t y0inv = fp::invmod(y[0], p);
            for (int i = 0; i < n; ++i) {
                int64_t acc = i < static_cast<int>(x.size()) ? x[i] : 0;
                for (int j = 1; j <= i && j < static_cast<int>(y.size()); ++j)
                    acc = (acc - y[j] * c[i - j]) % p;
                c[i] = (acc % p + p) % p * y0inv % p;
            }
            return c;
        };
        auto node_series = [&](const fp::Poly& a, const fp::Poly& B, int n)
            -> std::optional<fp::Poly> {
            // x_s with 3 x^2 + 2 a x + B = 0, v(x_s) >= 1 branch
            fp::Poly x(n, 0);
            for (int it = 0; it < n + 2; ++it) {
                // f = 3x^2 + 2ax + B; f' = 6x + 2a
                fp::Poly f = smul(x, x, n);
                for (auto& v : f) v = v * 3 % p;
                fp::Poly ax = smul(series_of(a, n), x, n);
                for (int i = 0; i < n; ++i) {
                    int64_t add = 2 * ax[i] % p + (i < static_cast<int>(B.size()) ? B[i] : 0);
                    f[i] = (f[i] + add) % p;
                }
                bool zero = true;
                for (auto v : f)
                    if (v % p) zero = false;
                if (zero) break;
                fp::Poly fp_(n, 0);
                auto as = series_of(a, n);
                for (int i = 0; i < n; ++i) fp_[i] = (6 * x[i] % p + 2 * as[i]) % p;
                if (fp_[0] % p == 0) return std::nullopt;
                auto corr = sdiv_unit(f, fp_, n);
                for (int i = 0; i < n; ++i) x[i] = ((x[i] - corr[i]) % p + p) % p;
            }
            return x;
        };
        auto xs0 = node_series(fm.a, fm.B, prec0);
        if (!xs0 || (*xs0)[0] != 0 || (*xs0)[1] != 0) continue;
        int64_t s2 = (*xs0)[2];  // t^2 coefficient of the node branch at 0
        // chart at infinity: a*(u) = u^4 a(1/u), B* = u^8 B(1/u), C* = u^12 C(1/u)
        auto rev = [&](const fp::Poly& f, int d) {
            fp::Poly g(d + 1, 0);
            for (std::size_t i = 0; i < f.size(); ++i) g[d - i] = f[i];
            fp::trim(g);
            return g;
        };
        fp::Poly ai = rev(fm.a, 4), Bi = rev(fm.B, 8);
        if (ai.empty() || fp::eval(ai, 0, p) == 0) continue;
        auto xsi = node_series(ai, Bi, precI);
        if (!xsi) continue;
        // w* = x_s*(u)/u^3 to order 3
        if ((*xsi)[0] || (*xsi)[1] || (*xsi)[2]) continue;
        fp::Poly wst = {(*xsi)[3], (*xsi)[4], (*xsi)[5]};
        if (wst[0] == 0) continue;  // q5 would vanish
        for (int64_t d0 = 1; d0 < p; ++d0)
            for (int64_t d1 = 0; d1 < p; ++d1)
                for (int64_t d2 = 0; d2 < p; ++d2) {
                    fp::Poly D = {d0, d1, d2, 1};
                    // reversed D: D*(u) = 1 + d2 u + d1 u^2 + d0 u^3
                    fp::Poly Dst = {1, d2, d1};  // mod u^3 is enough
                    fp::Poly Dst2 = smul(Dst, Dst, 3);
                    // q*(u) = D*^2 w* mod u^3 pins q5, q4, q3
                    fp::Poly qst = smul(Dst2, wst, 3);
                    int64_t q5 = qst[0], q4 = qst[1], q3 = qst[2];
                    int64_t D0sq = d0 * d0 % p;
                    int64_t q0 = s2 * D0sq % p;
                    if (q0 == 0) continue;  // far component needs exact order 2
                    fp::Poly D2 = fp::mul(D, D, p);
                    fp::Poly D4 = fp::mul(D2, D2, p);
                    fp::Poly D6 = fp::mul(D4, D2, p);
                    fp::Poly aD2 = fp::mul(fm.a, D2, p);
                    fp::Poly BD4 = fp::mul(fm.B, D4, p);
                    fp::Poly CD6 = fp::mul(fm.C, D6, p);
                    // pointwise prefilter data at a few sample abscissae
                    struct Pt {
                        int64_t t, t2, aD2v, BD4v, CD6v;
                    };
                    Pt pts[2];
                    for (int k = 0; k < 2; ++k) {
                        int64_t tv = k + 1;
                        pts[k] = {tv, tv * tv % p, fp::eval(aD2, tv, p), fp::eval(BD4, tv, p),
                                  fp::eval(CD6, tv, p)};
                    }
                    for (int64_t q1 = 0; q1 < p; ++q1)
                        for (int64_t q2 = 0; q2 < p; ++q2) {
                            // chi prefilter: G(t) must be a square value at
                            // sample points (it is t^4 * square there)
                            bool maybe = true;
                            for (const auto& pt : pts) {
                                int64_t qv = ((((q5 * pt.t + q4) % p * pt.t + q3) % p * pt.t +
                                               q2) % p * pt.t + q1) % p * pt.t + q0;
                                int64_t Nv = qv % p * pt.t2 % p;
                                int64_t Gv = ((Nv * Nv % p * Nv + pt.aD2v * Nv % p * Nv +
                                               pt.BD4v * Nv + pt.CD6v) % p + p) % p;
                                if (chi[Gv] == -1) {
                                    maybe = false;
                                    break;
                                }
                            }
                            if (!maybe) continue;
                            fp::Poly N = {0, 0, q0, q1, q2, q3, q4, q5};
                            fp::trim(N);
                            if (N.size() != 8) continue;
                            fp::Poly N2 = fp::mul(N, N, p);
                            fp::Poly G = fp::mul(N2, N, p);
                            G = fp::add(G, fp::mul(N2, aD2, p), p);
                            G = fp::add(G, fp::mul(N, BD4, p), p);
                            G = fp::add(G, CD6, p);
                            if (!fp::strip_even_valuation(G)) continue;
                            if (G.empty()) continue;
                            if (fp::is_square(G, p, chi))
                                out.push_back({p,
                                               {static_cast<long>(r), static_cast<long>(q0),
                                                static_cast<long>(q1), static_cast<long>(q2),
                                                static_cast<long>(q3), static_cast<long>(q4),
                                                static_cast<long>(q5), static_cast<long>(d0),
                                                static_cast<long>(d1), static_cast<long>(d2)},
                                               0});
                        }
                }
    }
    return out;
}

inline std::vector<ModPCandidate> scan_n57_pole(const FamilyDescriptor& fd, long p,
                                                int threads) {
    if (threads <= 1) return scan_n57_pole_range(fd, p, 0, p);
    std::vector<std::vector<ModPCandidate>> parts(threads);
    std::vector<std::thread> pool;
    int64_t chunk = (p + threads - 1) / threads;
    for (int i = 0; i < threads; ++i) {
        int64_t lo = i * chunk, hi = std::min<int64_t>(p, lo + chunk);
        pool.emplace_back([&, i, lo, hi] { parts[i] = scan_n57_pole_range(fd, p, lo, hi); });
    }
    for (auto& th : pool) th.join();
    std::vector<ModPCandidate> out;
    for (auto& part : parts)
        for (auto& c : part) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const ModPCandidate& a, const ModPCandidate& b) {
        return a.residues < b.residues;
    });
    return out;
}

// ---- Hensel lifting -----------------------------------------------------------
//
// The square-condition system F(u) = 0 over Z/p^k: u is the unknown vector
// (parameter first), F the top Taylor coefficients of the square root of the
// stripped right-hand side.  Newton doubles the correct precision each step;
// a singular mod-p Jacobian reports LiftStuck.

namespace search_detail {

using ZPoly = Polynomial<Zmod>;

// Evaluate a rational function of the family parameter modulo p^k.
inline Zmod eval_ratfn_mod(const RatFn& c, const Zmod& r) {
    const Int& m = r.modulus();
    auto ev = [&](const PolyQ& f) {
        Zmod acc(0, m);
        for (int i = f.degree(); i >= 0; --i) {
            const Rat& x = f.coeff(i);
            Zmod num(x.get_num(), m), den(x.get_den(), m);
            acc = acc * r + num / den;
        }
        return acc;
    };
    return ev(c.num()) / ev(c.den());
}

inline ZPoly family_poly_mod(const Polynomial<RatFn>& poly, const Zmod& r) {
    std::vector<Zmod> c;
    for (int i = 0; i <= poly.degree(); ++i) c.push_back(eval_ratfn_mod(poly.coeff(i), r));
    return ZPoly(std::move(c));
}

// Taylor coefficients s_(m+1) .. s_(2m) of the square root of a degree-2m
// polynomial H with H(0) a unit square; exactly the obstruction to H being a
// perfect square.
inline std::vector<Zmod> square_defect(const ZPoly& H, const Int& p, long k) {
    if (H.is_zero_poly() || H.degree() % 2)
        raise(errc::lift_stuck, "stripped right-hand side malformed");
    int m = H.degree() / 2;
    auto h0 = H.coeff(0);
    auto root = sqrt_mod_pk(h0.value(), p, static_cast<unsigned long>(k));
    if (!root) raise(errc::lift_stuck, "constant term is not a unit square");
    Int mod = int_pow(p, static_cast<unsigned long>(k));
    std::vector<Zmod> s(2 * m + 1, Zmod(0, mod));
    s[0] = Zmod(*root, mod);
    Zmod inv2s0 = inv(Zmod(2, mod) * s[0]);
    for (int n = 1; n <= 2 * m; ++n) {
        Zmod acc = n <= H.degree() ? H.coeff(n) : Zmod(0, mod);
        for (int i = 1; i < n; ++i) acc = acc - s[i] * s[n - i];
        s[n] = acc * inv2s0;
    }
    return std::vector<Zmod>(s.begin() + m + 1, s.end());
}

// Square condition for a section through a far fiber component at t = 0:
// the right-hand side G must vanish to order 6 exactly (two coefficient
// equations) with G / t^6 a perfect square (its square-root defect).
inline std::vector<Zmod> square_defect_far(const ZPoly& G, const Int& p, long k) {
    if (G.degree() < 6) raise(errc::lift_stuck, "right-hand side degenerates");
    std::vector<Zmod> out;
    out.push_back(G.coeff(4));
    out.push_back(G.coeff(5));
    std::vector<Zmod> h;
    for (int i = 6; i <= G.degree(); ++i) h.push_back(G.coeff(i));
    auto defect = square_defect(ZPoly(h), p, k);
    for (auto& d : defect) out.push_back(d);
    return out;
}

// Shape-specific system builders mapping the unknown vector to the defect.
struct LiftSystem {
    // unknowns: parameter first, then section data
    std::function<std::vector<Zmod>(const std::vector<Zmod>&, const Int&, long)> defect;
    std::size_t arity;
};

inline ZPoly monomial_t(const Zmod& one, int d) { return ZPoly::monomial(one, d); }

inline LiftSystem lift_system(const FamilyDescriptor& fd, long level, long disc) {
    LiftSystem sys;
    if (level == 6 && disc == -19) {
        sys.arity = 2;
        sys.defect = [fd](const std::vector<Zmod>& u, const Int& p, long k) {
            const Zmod& b = u[0];
            const Zmod& t1 = u[1];
            Zmod one = one_like(b), zero = zero_like(b);
            ZPoly a = family_poly_mod(fd.symbolic.coeffs[0], b);
            ZPoly B = family_poly_mod(fd.symbolic.coeffs[1], b);
            ZPoly C = family_poly_mod(fd.symbolic.coeffs[2], b);
            ZPoly X = b * ZPoly({zero, zero, one, -one}) * ZPoly({one, t1});
            ZPoly G = X * X * X + a * X * X + B * X + C;
            ZPoly div = ZPoly({zero, zero, zero, -one, one});
            div = div * div;
            auto [H, rem] = divmod(G, div);
            if (!rem.is_zero_poly()) raise(errc::lift_stuck, "forced factor does not divide");
            H = inv(b * b * b) * H;
            return square_defect(H, p, k);
        };
        return sys;
    }
    if (level == 14 && disc == -67) {
        sys.arity = 4;
        sys.defect = [fd](const std::vector<Zmod>& u, const Int& p, long k) {
            const Zmod& r = u[0];
            Zmod one = one_like(r), zero = zero_like(r);
            ZPoly a = family_poly_mod(fd.symbolic.coeffs[0], r);
            ZPoly B = family_poly_mod(fd.symbolic.coeffs[1], r);
            ZPoly C = family_poly_mod(fd.symbolic.coeffs[2], r);
            Zmod root2 = Zmod(2, r.modulus()) * r + one;
            ZPoly base = ZPoly({zero, one}) * ZPoly({-root2, one});
            ZPoly X = base * ZPoly({u[1], u[2], u[3]});
            ZPoly G = X * X * X + a * X * X + B * X + C;
            auto [H, rem] = divmod(G, base * base);
            if (!rem.is_zero_poly()) raise(errc::lift_stuck, "forced factor does not divide");
            return square_defect(H, p, k);
        };
        return sys;
    }
    if (level == 57 && disc == -267) {
        sys.arity = 4;
        sys.defect = [fd](const std::vector<Zmod>& u, const Int& p, long k) {
            const Zmod& r = u[0];
            Zmod one = one_like(r), zero = zero_like(r);
            ZPoly a = family_poly_mod(fd.symbolic.coeffs[0], r);
            ZPoly B = family_poly_mod(fd.symbolic.coeffs[1], r);
            ZPoly C = family_poly_mod(fd.symbolic.coeffs[2], r);
            ZPoly X = ZPoly({zero, zero, u[1], u[2], u[3]});
            ZPoly G = X * X * X + a * X * X + B * X + C;
            (void)one;
            // the t^0..t^3 coefficients vanish identically for this shape
            return square_defect_far(G, p, k);
        };
        return sys;
    }
    if (level == 57 && disc == -627) {
        sys.arity = 10;
        sys.defect = [fd](const std::vector<Zmod>& u, const Int& p, long k) {
            const Zmod& r = u[0];
            Zmod one = one_like(r), zero = zero_like(r);
            ZPoly a = family_poly_mod(fd.symbolic.coeffs[0], r);
            ZPoly B = family_poly_mod(fd.symbolic.coeffs[1], r);
            ZPoly C = family_poly_mod(fd.symbolic.coeffs[2], r);
            ZPoly N = ZPoly({zero, zero, u[1], u[2], u[3], u[4], u[5], u[6]});
            ZPoly D = ZPoly({u[7], u[8], u[9], one});
            ZPoly D2 = D * D;
            ZPoly D4 = D2 * D2;
            ZPoly G = N * N * N + a * N * N * D2 + B * N * D4 + C * D4 * D2;
            (void)one;
            return square_defect_far(G, p, k);
        };
        return sys;
    }
    raise(errc::not_found, "no section-search shape for this level/discriminant");
}

// Solve the (possibly overdetermined) system J x = y mod p^k with unit
// pivoting; surplus rows must reduce to 0 = 0 or the lift is stuck.
inline std::vector<Zmod> solve_mod(std::vector<std::vector<Zmod>> J, std::vector<Zmod> y,
                                   const Int& p) {
    std::size_t rows = J.size();
    std::size_t cols = rows ? J[0].size() : 0;
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = c; r < rows; ++r)
            if (J[r][c].value() % p != 0) {
                piv = r;
                break;
            }
        if (piv == rows) raise(errc::lift_stuck, "singular Jacobian mod p");
        std::swap(J[piv], J[c]);
        std::swap(y[piv], y[c]);
        Zmod d = inv(J[c][c]);
        for (std::size_t j = c; j < cols; ++j) J[c][j] = J[c][j] * d;
        y[c] = y[c] * d;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == c || is_zero(J[r][c])) continue;
            Zmod f = J[r][c];
            for (std::size_t j = c; j < cols; ++j) J[r][j] = J[r][j] - f * J[c][j];
            y[r] = y[r] - f * y[c];
        }
    }
    for (std::size_t r = cols; r < rows; ++r)
        if (!is_zero(y[r])) raise(errc::lift_stuck, "inconsistent overdetermined step");
    y.resize(cols);
    return y;
}

}  // namespace search_detail

// Newton-lift a mod-p candidate of the square-condition system to p^k.
// Invariant: the defect vanishes mod p^k; each step doubles k.  A singular
// mod-p Jacobian or a defect that fails to vanish reports LiftStuck.
inline std::vector<PadicScalar> hensel_lift(const FamilyDescriptor& fd, long disc,
                                            const ModPCandidate& cand, long k_target) {
    auto sys = search_detail::lift_system(fd, fd.level, disc);
    if (cand.residues.size() != sys.arity)
        raise(errc::invalid_argument, "candidate arity mismatch");
    Int p(cand.p);
    long k = 1;
    std::vector<Int> u;
    for (long v : cand.residues) u.emplace_back(v);
    while (k < k_target) {
        long k2 = std::min(2 * k, k_target);
        long kj = k2 - k;  // precision of the correction
        Int mod2 = int_pow(p, static_cast<unsigned long>(k2));
        Int pk = int_pow(p, static_cast<unsigned long>(k));
        Int modj = int_pow(p, static_cast<unsigned long>(kj));
        std::vector<Zmod> uz;
        for (const auto& x : u) uz.emplace_back(x, mod2);
        auto F = sys.defect(uz, p, k2);
        std::size_t nun = uz.size();
        std::size_t neq = F.size();
        if (neq < nun) raise(errc::lift_stuck, "underdetermined system");
        for (const auto& f : F)
            if (f.value() % pk != 0)
                raise(errc::lift_stuck, "defect does not vanish at the claimed precision");
        // Jacobian mod p^kj by finite differences at scale p^k (exact there).
        std::vector<std::vector<Zmod>> J(neq, std::vector<Zmod>(nun, Zmod(0, modj)));
        for (std::size_t j = 0; j < nun; ++j) {
            auto up = uz;
            up[j] = up[j] + Zmod(pk, mod2);
            auto Fp = sys.defect(up, p, k2);
            for (std::size_t i = 0; i < neq; ++i) {
                Int diff = (Fp[i].value() - F[i].value()) % mod2;
                if (diff < 0) diff += mod2;
                if (diff % pk != 0) raise(errc::lift_stuck, "non-smooth defect");
                J[i][j] = Zmod(diff / pk, modj);
            }
        }
        std::vector<Zmod> rhs;
        for (std::size_t i = 0; i < neq; ++i) rhs.emplace_back(F[i].value() / pk, modj);
        auto delta = search_detail::solve_mod(J, rhs, p);
        for (std::size_t j = 0; j < nun; ++j) {
            u[j] = (u[j] - delta[j].value() * pk) % mod2;
            if (u[j] < 0) u[j] += mod2;
        }
        k = k2;
    }
    std::vector<PadicScalar> out;
    for (const auto& x : u) out.emplace_back(p, k, x);
    return out;
}

// ---- the full pipeline ----------------------------------------------------------

namespace search_detail {

// Achievable canonical heights of a polynomial-shape extra section on a
// rank-zero family: {4 - cA - cB} over the component choices.
inline bool budget_feasible(const FamilyDescriptor& fd, long disc) {
    if (fd.level == 57) return true;  // rank one: the Gram condition decides
    Rat target = make_rat(-disc, 2 * fd.level);
    std::vector<std::vector<Rat>> menus;
    for (const auto& l : fd.generic_roots) {
        std::vector<Rat> menu{Rat(0)};
        if (l.kind == RootKind::A)
            for (int i = 1; i <= l.n; ++i)
                menu.push_back(component_contribution({l, std::min(i, l.n + 1 - i)}));
        if (l.kind == RootKind::D) {
            menu.push_back(Rat(1));
            menu.push_back(component_contribution({l, 2}));
        }
        if (l.kind == RootKind::E && l.n < 8)
            menu.push_back(component_contribution({l, 1}));
        menus.push_back(menu);
    }
    std::vector<Rat> totals{Rat(0)};
    for (const auto& menu : menus) {
        std::vector<Rat> next;
        for (const auto& t : totals)
            for (const auto& m : menu) next.push_back(t + m);
        totals = std::move(next);
    }
    for (const auto& t : totals)
        if (Rat(4) - t == target) return true;
    return false;
}

}  // namespace search_detail

namespace search_detail {

// Weierstrass point count of the family member at a parameter residue
// (diagnostic data on scan survivors).
inline long count_points_residue(const FamilyDescriptor& fd, long r, long p) {
    auto fm = family_mod_p(fd, r, p);
    if (!fm.good) raise(errc::bad_reduction, "parameter residue hits a pole");
    int64_t inv3 = fp::invmod(3, p);
    int64_t inv27 = fp::invmod(27, p);
    // short form: A = B - a^2/3, Bs = C - aB/3 + 2a^3/27
    fp::Poly a2 = fp::mul(fm.a, fm.a, p);
    fp::Poly A = fp::add(fm.B, fp::scale(a2, p - inv3, p), p);
    fp::Poly aB = fp::mul(fm.a, fm.B, p);
    fp::Poly a3 = fp::mul(a2, fm.a, p);
    fp::Poly Bs = fp::add(fm.C, fp::scale(aB, p - inv3, p), p);
    Bs = fp::add(Bs, fp::scale(a3, 2 * inv27 % p, p), p);
    {
        fp::Poly A3 = fp::mul(fp::mul(A, A, p), A, p);
        fp::Poly B2 = fp::mul(Bs, Bs, p);
        fp::Poly delta = fp::add(fp::scale(A3, 4, p), fp::scale(B2, 27, p), p);
        if (delta.empty()) raise(errc::bad_reduction, "discriminant vanishes mod p");
    }
    auto chi = fp::legendre_table(p);
    long total = 0;
    auto fiber_count = [&](int64_t av, int64_t bv) {
        long n = 1;
        for (int64_t x = 0; x < p; ++x) {
            int64_t v = ((x * x % p * x + av * x + bv) % p + p) % p;
            n += 1 + chi[v];
        }
        return n;
    };
    for (int64_t t = 0; t < p; ++t) total += fiber_count(fp::eval(A, t, p), fp::eval(Bs, t, p));
    int64_t atop = A.size() == 9 ? A[8] : 0;
    int64_t btop = Bs.size() == 13 ? Bs[12] : 0;
    total += fiber_count(atop, btop);
    return total;
}

// Assemble the CM record claimed by a reconstructed solution vector.
inline CMRecord assemble_record(const FamilyDescriptor& fd, long disc,
                                const std::vector<Rat>& rec) {
    CMRecord out;
    out.level = fd.level;
    out.discriminant = disc;
    out.kind = WitnessKind::extra_section;
    out.parameter = rec[0];
    out.expected_roots = fd.generic_roots;
    out.use_generic_sections = fd.level == 57;
    auto S = family_at(fd, rec[0]);
    RatFn X;
    if (fd.level == 6) {
        X = RatFn(rec[0] * polyq({0, 0, 1, -1}) * PolyQ{Rat(1), rec[1]});
    } else if (fd.level == 14) {
        PolyQ base = polyq({0, 1}) * PolyQ{-(Rat(2) * rec[0] + Rat(1)), Rat(1)};
        X = RatFn(base * PolyQ{rec[1], rec[2], rec[3]});
    } else if (disc == -267) {
        X = RatFn(PolyQ{Rat(0), Rat(0), rec[1], rec[2], rec[3]});
    } else {
        PolyQ q{rec[1], rec[2], rec[3], rec[4], rec[5], rec[6]};
        PolyQ D{rec[7], rec[8], rec[9], Rat(1)};
        X = RatFn(polyq({0, 0, 1}) * q, D * D);
    }
    out.extra_sections.push_back(catalog_detail::section_from_x(S, X));
    out.crossref = "found by the mod-p search pipeline";
    return out;
}

}  // namespace search_detail

struct SearchResult {
    CMRecord record;
    long prime = 0;
    long precision = 0;
    std::vector<ModPCandidate> survivors;
};

// The full pipeline: choose a prime, scan, lift, recognize, verify.  Only
// verified records are returned.
inline SearchResult find_cm_point(const SearchSpec& spec,
                                  const std::function<void(const std::string&)>& progress = {}) {
    auto fd = build_family(spec.level);
    long D = spec.discriminant;
    if (!search_detail::budget_feasible(fd, D))
        raise(errc::not_found, "height budget |D|/2N is not achievable by a section shape");
    long p = spec.prime_override ? *spec.prime_override : choose_prime(D, fd);
    if (progress) progress("prime " + std::to_string(p));

    std::vector<ModPCandidate> cands;
    if (spec.level == 6 && D == -19)
        cands = scan_n6(p);
    else if (spec.level == 14 && D == -67)
        cands = scan_n14(fd, p);
    else if (spec.level == 57 && D == -267)
        cands = scan_n57_poly(fd, p);
    else if (spec.level == 57 && D == -627)
        cands = scan_n57_pole(fd, p, spec.threads);
    else
        raise(errc::not_found, "no implemented section shape for this level/discriminant");
    if (progress) progress("survivors " + std::to_string(cands.size()));
    if (cands.empty()) raise(errc::not_found, "mod-p scan found no candidate");

    // Point counts as diagnostics on the surviving parameter residues.
    for (auto& c : cands) {
        try {
            c.point_count = search_detail::count_points_residue(fd, c.residues[0], p);
        } catch (const Error&) {
            c.point_count = -1;
        }
    }

    Error last(errc::not_found, "no candidate lifted");
    for (const auto& cand : cands) {
        try {
            long k = spec.initial_precision;
            std::vector<Rat> prev;
            while (k <= spec.max_precision) {
                auto lifted = hensel_lift(fd, D, cand, k);
                std::vector<Rat> rec;
                bool all = true;
                for (const auto& x : lifted) {
                    auto v = rational_reconstruct(x);
                    if (!v) {
                        all = false;
                        break;
                    }
                    rec.push_back(*v);
                }
                if (all && !prev.empty() && rec == prev) {
                    // stable reconstruction: assemble and verify
                    auto record = search_detail::assemble_record(fd, D, rec);
                    auto rep = verify_cm_record(record);
                    if (!rep.ok) raise(errc::verification_failed, rep.detail);
                    if (progress)
                        progress("verified r = " + record.parameter_str() + " at precision " +
                                 std::to_string(k));
                    return {record, p, k, cands};
                }
                prev = all ? rec : std::vector<Rat>{};
                k *= 2;
            }
            raise(errc::not_recognized, "reconstruction did not stabilize within the schedule");
        } catch (const Error& e) {
            last = e;
        }
    }
    throw last;
}

}  // namespace k3shim

#endif
