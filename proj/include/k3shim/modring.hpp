// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_MODRING_HPP
#define K3SHIM_MODRING_HPP

#include <optional>
#include <string>
#include <utility>

#include "k3shim/rational.hpp"

namespace k3shim {

// Residue ring Z/m with the modulus carried per element.  Mixing moduli is a
// programming error and throws.  Division exists for units only.
class Zmod {
  public:
    Zmod() : v_(0), m_(0) {}  // "unbound" zero; usable only via zero_like paths
    Zmod(Int v, Int m) : v_(std::move(v)), m_(std::move(m)) {
        if (m_ <= 0) raise(errc::invalid_argument, "modulus must be positive");
        reduce();
    }
    Zmod(long v, const Int& m) : Zmod(Int(v), m) {}

    const Int& value() const { return v_; }
    const Int& modulus() const { return m_; }
    bool bound() const { return m_ != 0; }

    friend Zmod operator+(const Zmod& a, const Zmod& b) {
        auto [x, y] = align(a, b);
        return Zmod(x.v_ + y.v_, x.m_);
    }
    friend Zmod operator-(const Zmod& a, const Zmod& b) {
        auto [x, y] = align(a, b);
        return Zmod(x.v_ - y.v_, x.m_);
    }
    friend Zmod operator*(const Zmod& a, const Zmod& b) {
        auto [x, y] = align(a, b);
        return Zmod(x.v_ * y.v_, x.m_);
    }
    Zmod operator-() const { return bound() ? Zmod(-v_, m_) : Zmod(); }

    friend bool operator==(const Zmod& a, const Zmod& b) {
        if (!a.bound() || !b.bound()) return a.v_ == 0 && b.v_ == 0 && a.bound() == b.bound();
        return a.m_ == b.m_ && a.v_ == b.v_;
    }
    friend bool operator!=(const Zmod& a, const Zmod& b) { return !(a == b); }

    Zmod& operator+=(const Zmod& o) { return *this = *this + o; }
    Zmod& operator-=(const Zmod& o) { return *this = *this - o; }
    Zmod& operator*=(const Zmod& o) { return *this = *this * o; }

    std::optional<Zmod> try_inv() const {
        if (!bound() || v_ == 0) return std::nullopt;
        Int g, s;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, v_.get_mpz_t(), m_.get_mpz_t());
        if (g != 1) return std::nullopt;
        return Zmod(s, m_);
    }

    std::string str() const { return v_.get_str(); }

  private:
    void reduce() {
        if (m_ != 0) {
            mpz_mod(v_.get_mpz_t(), v_.get_mpz_t(), m_.get_mpz_t());
        }
    }
    static std::pair<const Zmod&, const Zmod&> align(const Zmod& a, const Zmod& b) {
        if (a.bound() && b.bound() && a.m_ != b.m_)
            raise(errc::invalid_argument, "modulus mismatch");
        if (!a.bound() && !b.bound()) raise(errc::invalid_argument, "unbound residues");
        // An unbound operand acts as the integer 0 of the other's ring.
        if (!a.bound()) {
            static thread_local Zmod tmp;
            tmp = Zmod(0, b.m_);
            return {tmp, b};
        }
        if (!b.bound()) {
            static thread_local Zmod tmp;
            tmp = Zmod(0, a.m_);
            return {a, tmp};
        }
        return {a, b};
    }

    Int v_, m_;
};

inline Zmod zero_like(const Zmod& x) { return x.bound() ? Zmod(0, x.modulus()) : Zmod(); }
inline Zmod one_like(const Zmod& x) {
    if (!x.bound()) raise(errc::invalid_argument, "one_like of unbound residue");
    return Zmod(1, x.modulus());
}
inline bool is_zero(const Zmod& x) { return x.value() == 0; }
inline Zmod inv(const Zmod& x) {
    auto r = x.try_inv();
    if (!r) raise(errc::invalid_argument, "residue not invertible");
    return *r;
}
inline Zmod operator/(const Zmod& a, const Zmod& b) { return a * inv(b); }

class Zmod;
inline std::optional<Int> sqrt_mod_p(const Int& a0, const Int& p);

// Square root of a residue; meaningful for prime moduli.
inline std::optional<Zmod> field_sqrt(const Zmod& x);

// Square root in Z/p (p an odd prime), by exhaustion for small p and
// Tonelli-Shanks otherwise.
inline std::optional<Int> sqrt_mod_p(const Int& a0, const Int& p) {
    Int a = a0 % p;
    if (a < 0) a += p;
    if (a == 0) return Int(0);
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    if (p < 1000) {
        for (Int x = 1; x < p; ++x)
            if ((x * x) % p == a) return x;
        return std::nullopt;
    }
    // Tonelli-Shanks
    Int q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    auto powm = [&](const Int& b, const Int& e) {
        Int r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    Int m(static_cast<unsigned long>(s)), c = powm(z, q), t = powm(a, q), r = powm(a, (q + 1) / 2);
    while (t != 1) {
        Int tt = t;
        unsigned long i = 0;
        while (tt != 1) {
            tt = (tt * tt) % p;
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - Int(i) - 1; ++j) b = (b * b) % p;
        m = Int(i);
        c = (b * b) % p;
        t = (t * c) % p;
        r = (r * b) % p;
    }
    return r;
}

inline std::optional<Zmod> field_sqrt(const Zmod& x) {
    if (!x.bound()) raise(errc::invalid_argument, "sqrt of unbound residue");
    auto r = sqrt_mod_p(x.value(), x.modulus());
    if (!r) return std::nullopt;
    return Zmod(*r, x.modulus());
}

// Square root in Z/p^k lifted from Z/p (unit arguments, odd p).
inline std::optional<Int> sqrt_mod_pk(const Int& a, const Int& p, unsigned long k) {
    Int pk = int_pow(p, k);
    Int a0 = a % pk;
    if (a0 < 0) a0 += pk;
    if (a0 % p == 0) return std::nullopt;  // unit case only
    auto r0 = sqrt_mod_p(a0, p);
    if (!r0) return std::nullopt;
    // Newton: x -> (x + a/x)/2, doubling correctness per step.
    Int x = *r0;
    Int mod = p;
    unsigned long prec = 1;
    while (prec < k) {
        prec = std::min(2 * prec, k);
        mod = int_pow(p, prec);
        Int xinv, g;
        mpz_gcdext(g.get_mpz_t(), xinv.get_mpz_t(), nullptr, x.get_mpz_t(), mod.get_mpz_t());
        Int two_inv, g2, two(2);
        mpz_gcdext(g2.get_mpz_t(), two_inv.get_mpz_t(), nullptr, two.get_mpz_t(), mod.get_mpz_t());
        x = ((x + (a0 % mod) * xinv) % mod) * two_inv % mod;
        if (x < 0) x += mod;
    }
    return x;
}

// p-adic scalar: residue modulo p^k with explicit precision accounting.
// Addition/multiplication keep the minimum precision of the operands;
// division by p^v costs v digits of precision.
class PadicScalar {
  public:
    PadicScalar(Int prime, long k, Int residue)
        : p_(std::move(prime)), k_(k), v_(std::move(residue)) {
        if (p_ < 2) raise(errc::invalid_prime, "p must be at least 2");
        if (k_ < 1) raise(errc::invalid_argument, "precision must be >= 1");
        reduce();
    }

    const Int& prime() const { return p_; }
    long precision() const { return k_; }
    const Int& residue() const { return v_; }
    Int modulus() const { return int_pow(p_, static_cast<unsigned long>(k_)); }

    // p-adic valuation, capped at the current precision.
    long valuation() const {
        if (v_ == 0) return k_;
        long val = 0;
        Int t = v_;
        while (mpz_divisible_p(t.get_mpz_t(), p_.get_mpz_t())) {
            t /= p_;
            ++val;
        }
        return val;
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        long k = a.match(b);
        return PadicScalar(a.p_, k, a.v_ + b.v_);
    }
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
        long k = a.match(b);
        return PadicScalar(a.p_, k, a.v_ - b.v_);
    }
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        long k = a.match(b);
        return PadicScalar(a.p_, k, a.v_ * b.v_);
    }
    PadicScalar operator-() const { return PadicScalar(p_, k_, -v_); }

    // Division tracks lost precision: v(b) digits disappear.
    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        long k = a.match(b);
        long vb = b.valuation();
        if (vb >= k) raise(errc::invalid_argument, "division by (numerically) zero p-adic");
        if (a.valuation() < vb) raise(errc::invalid_argument, "quotient not p-adically integral");
        Int pa = int_pow(a.p_, static_cast<unsigned long>(vb));
        Int ua = a.v_ / pa, ub = b.v_ / pa;
        long kk = k - vb;
        Int mod = int_pow(a.p_, static_cast<unsigned long>(kk));
        Int g, s;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, ub.get_mpz_t(), mod.get_mpz_t());
        if (g != 1) raise(errc::internal_error, "unit part not invertible");
        return PadicScalar(a.p_, kk, ua * s);
    }

    friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
        long k = std::min(a.k_, b.k_);
        Int mod = int_pow(a.p_, static_cast<unsigned long>(k));
        return a.p_ == b.p_ && (a.v_ - b.v_) % mod == 0;
    }

    PadicScalar with_precision(long k) const { return PadicScalar(p_, k, v_); }

  private:
    void reduce() {
        Int mod = modulus();
        mpz_mod(v_.get_mpz_t(), v_.get_mpz_t(), mod.get_mpz_t());
    }
    long match(const PadicScalar& o) const {
        if (p_ != o.p_) raise(errc::invalid_argument, "p-adic prime mismatch");
        return std::min(k_, o.k_);
    }

    Int p_;
    long k_;
    Int v_;
};

}  // namespace k3shim

#endif
