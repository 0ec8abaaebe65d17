// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_QUOTFIELD_HPP
#define K3SHIM_QUOTFIELD_HPP

#include <memory>
#include <optional>
#include <utility>

#include "k3shim/polynomial.hpp"

namespace k3shim {

// Residue field F[x]/(pi) for monic irreducible pi.  Used as the residue
// field of a Galois-orbit place; only the field operations needed by the
// local fiber analysis are provided.
template <typename F>
class QuotientField {
  public:
    QuotientField() = default;  // unbound zero
    QuotientField(Polynomial<F> value, std::shared_ptr<const Polynomial<F>> modulus)
        : v_(std::move(value)), pi_(std::move(modulus)) {
        reduce();
    }
    static QuotientField generator(std::shared_ptr<const Polynomial<F>> modulus) {
        const F& one = modulus->lc();
        return QuotientField(Polynomial<F>{zero_like(one), one_like(one)}, std::move(modulus));
    }

    const Polynomial<F>& value() const { return v_; }
    bool bound() const { return static_cast<bool>(pi_); }
    const std::shared_ptr<const Polynomial<F>>& modulus() const { return pi_; }

    friend QuotientField operator+(const QuotientField& a, const QuotientField& b) {
        auto m = merge(a, b);
        return QuotientField(a.v_ + b.v_, m);
    }
    friend QuotientField operator-(const QuotientField& a, const QuotientField& b) {
        auto m = merge(a, b);
        return QuotientField(a.v_ - b.v_, m);
    }
    friend QuotientField operator*(const QuotientField& a, const QuotientField& b) {
        auto m = merge(a, b);
        return QuotientField(a.v_ * b.v_, m);
    }
    QuotientField operator-() const { return QuotientField(-v_, pi_); }
    friend bool operator==(const QuotientField& a, const QuotientField& b) {
        return a.v_ == b.v_;
    }
    friend bool operator!=(const QuotientField& a, const QuotientField& b) { return !(a == b); }

  private:
    void reduce() {
        if (pi_ && !v_.is_zero_poly()) v_ = v_ % *pi_;
    }
    static std::shared_ptr<const Polynomial<F>> merge(const QuotientField& a,
                                                      const QuotientField& b) {
        if (a.pi_) return a.pi_;
        return b.pi_;
    }

    Polynomial<F> v_;
    std::shared_ptr<const Polynomial<F>> pi_;
};

template <typename F>
bool is_zero(const QuotientField<F>& x) {
    return x.value().is_zero_poly();
}
template <typename F>
QuotientField<F> zero_like(const QuotientField<F>& x) {
    return QuotientField<F>(Polynomial<F>(), x.modulus());
}
template <typename F>
QuotientField<F> one_like(const QuotientField<F>& x) {
    if (!x.bound()) raise(errc::invalid_argument, "one_like of unbound quotient element");
    return QuotientField<F>(Polynomial<F>{one_like(x.modulus()->lc())}, x.modulus());
}
template <typename F>
QuotientField<F> inv(const QuotientField<F>& x) {
    if (!x.bound() || is_zero(x)) raise(errc::invalid_argument, "quotient inverse of zero");
    // Extended Euclid in F[x].
    Polynomial<F> r0 = *x.modulus(), r1 = x.value();
    Polynomial<F> s0, s1{one_like(x.modulus()->lc())};
    while (!r1.is_zero_poly()) {
        auto [q, r2] = divmod(r0, r1);
        Polynomial<F> s2 = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0.degree() != 0)
        raise(errc::invalid_argument, "element not invertible (modulus not irreducible here)");
    return QuotientField<F>(inv(r0.lc()) * s0, x.modulus());
}

// No general square-root test is provided in quotient fields; local analyses
// that need splitness report "unknown" there.
template <typename F>
std::optional<QuotientField<F>> field_sqrt(const QuotientField<F>& x) {
    if (is_zero(x)) return x;
    // Degree-1 modulus degenerates to the base field.
    if (x.bound() && x.modulus()->degree() == 1) {
        auto r = field_sqrt(x.value().coeff(0));
        if (!r) return std::nullopt;
        return QuotientField<F>(Polynomial<F>{*r}, x.modulus());
    }
    return std::nullopt;
}

}  // namespace k3shim

#endif
