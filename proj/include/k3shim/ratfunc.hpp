// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_RATFUNC_HPP
#define K3SHIM_RATFUNC_HPP

#include <optional>
#include <string>
#include <utility>

#include "k3shim/polynomial.hpp"

namespace k3shim {

// Rational function over a field F whose default construction is zero
// (F = Rat, or recursively RationalFunction<...>).  Normal form: denominator
// monic, gcd(num, den) = 1.
template <typename F>
class RationalFunction {
  public:
    RationalFunction() : num_(), den_{F(1)} {}
    RationalFunction(long n) : num_(n == 0 ? Polynomial<F>() : Polynomial<F>{F(n)}), den_{F(1)} {}
    explicit RationalFunction(const F& c)
        : num_(is_zero(c) ? Polynomial<F>() : Polynomial<F>{c}), den_{one_like(c)} {}
    explicit RationalFunction(Polynomial<F> num) : num_(std::move(num)), den_{F(1)} {
        if (!num_.is_zero_poly()) den_ = Polynomial<F>(one_like(num_.lc()));
    }
    RationalFunction(Polynomial<F> num, Polynomial<F> den)
        : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static RationalFunction variable() { return RationalFunction(Polynomial<F>{F(0), F(1)}); }

    const Polynomial<F>& num() const { return num_; }
    const Polynomial<F>& den() const { return den_; }
    bool is_zero_fn() const { return num_.is_zero_poly(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero_fn()) raise(errc::invalid_argument, "division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    RationalFunction operator-() const {
        RationalFunction r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
        return !(a == b);
    }

    RationalFunction pow(unsigned long e) const {
        RationalFunction acc(1), base = *this;
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    std::string str(const std::string& var = "t") const {
        if (is_polynomial()) return num_.str(var);
        return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero_poly()) raise(errc::invalid_argument, "zero denominator");
        if (num_.is_zero_poly()) {
            den_ = Polynomial<F>{one_like(den_.lc())};
            return;
        }
        auto g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        F l = inv(den_.lc());
        num_ = l * num_;
        den_ = l * den_;
    }

    Polynomial<F> num_, den_;
};

template <typename F>
bool is_zero(const RationalFunction<F>& x) {
    return x.is_zero_fn();
}
template <typename F>
RationalFunction<F> zero_like(const RationalFunction<F>&) {
    return RationalFunction<F>();
}
template <typename F>
RationalFunction<F> one_like(const RationalFunction<F>&) {
    return RationalFunction<F>(1);
}
template <typename F>
RationalFunction<F> inv(const RationalFunction<F>& x) {
    return RationalFunction<F>(1) / x;
}

// Square root in F(t): f = n/d is a square iff n*d is a square in F[t]
// (after the usual even-power bookkeeping).
template <typename F>
std::optional<RationalFunction<F>> field_sqrt(const RationalFunction<F>& x) {
    if (x.is_zero_fn()) return RationalFunction<F>();
    auto sn = poly_sqrt(x.num() * x.den());
    if (!sn) return std::nullopt;
    return RationalFunction<F>(*sn, x.den());
}

using RatFn = RationalFunction<Rat>;     // Q(t)
using RatFn2 = RationalFunction<RatFn>;  // Q(s)(t) towers

// Gcd of polynomials whose coefficients are rational functions: clear the
// denominators, run a primitive pseudo-remainder sequence over F[x][t] with
// content stripping (the fraction-field Euclidean algorithm swells badly on
// these towers).
template <typename F>
Polynomial<RationalFunction<F>> poly_gcd(const Polynomial<RationalFunction<F>>& a0,
                                         const Polynomial<RationalFunction<F>>& b0) {
    using RF = RationalFunction<F>;
    using Inner = Polynomial<F>;
    using Outer = Polynomial<Inner>;
    if (a0.is_zero_poly()) return make_monic(b0);
    if (b0.is_zero_poly()) return make_monic(a0);

    auto content = [](const Outer& p) {
        Inner c;
        for (const auto& x : p.coeffs()) c = poly_gcd(c, x);
        return c;
    };
    auto primitive = [&](Outer p) {
        if (p.is_zero_poly()) return p;
        Inner c = content(p);
        if (c.degree() > 0 || (!c.is_zero_poly() && !(c == one_like(c)))) {
            std::vector<Inner> v;
            for (const auto& x : p.coeffs()) v.push_back(x / c);
            p = Outer(std::move(v));
        }
        return p;
    };
    auto cleared = [&](const Polynomial<RF>& p) {
        Inner den{one_like(p.lc()).num().lc()};
        for (int i = 0; i <= p.degree(); ++i) {
            const Inner d = p.coeff(i).den();
            den = den * (d / poly_gcd(den, d));
        }
        std::vector<Inner> v;
        for (int i = 0; i <= p.degree(); ++i) {
            const RF ci = p.coeff(i);
            v.push_back(ci.num() * (den / ci.den()));
        }
        return primitive(Outer(std::move(v)));
    };

    Outer A = cleared(a0), B = cleared(b0);
    if (A.degree() < B.degree()) std::swap(A, B);
    while (!B.is_zero_poly() && B.degree() > 0) {
        Outer R = pseudo_rem(A, B);
        R = primitive(R);
        A = std::move(B);
        B = std::move(R);
    }
    if (!B.is_zero_poly()) return Polynomial<RF>{RF(1)};
    // back to monic over the fraction field
    std::vector<RF> g;
    for (int i = 0; i <= A.degree(); ++i) g.emplace_back(A.coeff(i), A.lc());
    return Polynomial<RF>(std::move(g));
}

// Order of vanishing of x at the root(s) of the squarefree factor pi
// (negative for poles).
template <typename F>
int valuation_at(const RationalFunction<F>& x, const Polynomial<F>& pi) {
    if (x.is_zero_fn()) raise(errc::invalid_argument, "valuation of zero");
    return factor_multiplicity(x.num(), pi) - factor_multiplicity(x.den(), pi);
}

template <typename F>
F evaluate_at(const RationalFunction<F>& x, const F& t0) {
    F d = x.den().evaluate(t0);
    if (is_zero(d)) raise(errc::needs_renormalization, "pole at evaluation point");
    return x.num().evaluate(t0) * inv(d);
}

}  // namespace k3shim

#endif
