// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_SURFACE_HPP
#define K3SHIM_SURFACE_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "k3shim/polynomial.hpp"
#include "k3shim/ratfunc.hpp"

namespace k3shim {

// Elliptic surface over K(t) in one of three Weierstrass shapes:
//   short:    Y^2 = X^3 + A X + B                 coeffs = {A, B}
//   extended: Y^2 = X^3 + a X^2 + b X + c         coeffs = {a, b, c}
//   long:     Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6
//             coeffs = {a1, a2, a3, a4, a6}
// K3 degree certificates apply to the short form: deg A <= 8, deg B <= 12,
// deg A > 4 or deg B > 6, and no place (including infinity) where A and B
// vanish to orders >= 4 and >= 6.
template <typename K>
struct SurfaceModel {
    enum class Form { short_form, extended, long_form };

    Form form = Form::short_form;
    std::vector<Polynomial<K>> coeffs;

    static SurfaceModel make_short(Polynomial<K> A, Polynomial<K> B) {
        return {Form::short_form, {std::move(A), std::move(B)}};
    }
    static SurfaceModel make_extended(Polynomial<K> a, Polynomial<K> b, Polynomial<K> c) {
        return {Form::extended, {std::move(a), std::move(b), std::move(c)}};
    }
    static SurfaceModel make_long(std::array<Polynomial<K>, 5> a) {
        return {Form::long_form, {a[0], a[1], a[2], a[3], a[4]}};
    }

    const Polynomial<K>& A() const {
        if (form != Form::short_form) raise(errc::invalid_argument, "not in short form");
        return coeffs[0];
    }
    const Polynomial<K>& B() const {
        if (form != Form::short_form) raise(errc::invalid_argument, "not in short form");
        return coeffs[1];
    }

    K sample() const {
        for (const auto& c : coeffs)
            if (!c.is_zero_poly()) return one_like(c.lc());
        return K(1);
    }
};

// Coordinate change carried along when a model is brought to short form:
// X_short = X + sx(t), Y_short = Y + (a1(t) X + a3(t)) / 2.
template <typename K>
struct ShortFormMap {
    Polynomial<K> sx;       // added to X
    Polynomial<K> y_lin;    // a1/2 (multiplies X in the Y shift)
    Polynomial<K> y_const;  // a3/2
};

template <typename K>
struct ShortForm {
    SurfaceModel<K> model;
    ShortFormMap<K> map;
};

// Multiplication of a polynomial over K by a rational constant, where K
// admits integer embeddings (all base fields here do).
template <typename K>
Polynomial<K> rat_scale(const Polynomial<K>& p, const Rat& r) {
    if (p.is_zero_poly()) return p;
    K num = K(0);
    // Embed the (possibly large) integers via repeated doubling on K(1).
    auto embed = [&](const Int& n) {
        K acc = K(0);
        K one = one_like(p.lc());
        bool neg = sgn(n) < 0;
        Int m = neg ? Int(-n) : n;
        K base = one;
        while (m != 0) {
            if (mpz_odd_p(m.get_mpz_t())) acc = acc + base;
            base = base + base;
            m >>= 1;
        }
        return neg ? -acc : acc;
    };
    K c = embed(r.get_num()) * inv(embed(r.get_den()));
    return c * p;
}

template <>
inline Polynomial<Rat> rat_scale<Rat>(const Polynomial<Rat>& p, const Rat& r) {
    return r * p;
}

// Bring any form to the short one, recording the substitution used.
template <typename K>
ShortForm<K> to_short_form(const SurfaceModel<K>& S) {
    using P = Polynomial<K>;
    P a, b, c;       // extended-form data
    P a1, a3;        // long-form linear part
    switch (S.form) {
        case SurfaceModel<K>::Form::short_form:
            return {S, ShortFormMap<K>{}};
        case SurfaceModel<K>::Form::extended:
            a = S.coeffs[0];
            b = S.coeffs[1];
            c = S.coeffs[2];
            break;
        case SurfaceModel<K>::Form::long_form: {
            a1 = S.coeffs[0];
            a3 = S.coeffs[2];
            const P& a2 = S.coeffs[1];
            const P& a4 = S.coeffs[3];
            const P& a6 = S.coeffs[4];
            // Complete the square in Y: b2/4, b4/2, b6/4.
            a = rat_scale(a1 * a1, make_rat(1, 4)) + a2;
            b = rat_scale(a1 * a3, make_rat(1, 2)) + a4;
            c = rat_scale(a3 * a3, make_rat(1, 4)) + a6;
            break;
        }
    }
    // Complete the cube in X: A = b - a^2/3, B = c - a b/3 + 2 a^3/27.
    P A = b - rat_scale(a * a, make_rat(1, 3));
    P B = c - rat_scale(a * b, make_rat(1, 3)) + rat_scale(a * a * a, make_rat(2, 27));
    ShortFormMap<K> map;
    map.sx = rat_scale(a, make_rat(1, 3));
    map.y_lin = rat_scale(a1, make_rat(1, 2));
    map.y_const = rat_scale(a3, make_rat(1, 2));
    return {SurfaceModel<K>::make_short(A, B), map};
}

// Discriminant polynomial Delta = -16 (4A^3 + 27B^2) with its valuation at
// infinity, 24 - deg Delta.
template <typename K>
struct SurfaceDiscriminant {
    Polynomial<K> delta;
    int v_infinity;
};

template <typename K>
SurfaceDiscriminant<K> surface_discriminant(const SurfaceModel<K>& S) {
    auto sf = to_short_form(S);
    const auto& A = sf.model.A();
    const auto& B = sf.model.B();
    Polynomial<K> delta =
        rat_scale(rat_scale(A * A * A, Rat(4)) + rat_scale(B * B, Rat(27)), Rat(-16));
    if (delta.is_zero_poly()) raise(errc::singular_model, "identically zero discriminant");
    return {delta, 24 - delta.degree()};
}

// K3 degree certificates on the short form.  Throws NotK3 / SingularModel.
// A common factor of multiplicity >= (4, 6) forces v(Delta) >= 12, so only
// the high-multiplicity layers of Delta need the valuation test (done on
// residues mod the small factors; see tate.hpp for the splitting helper).
template <typename K>
void check_k3(const SurfaceModel<K>& S);

// Quadratic twist by a constant or polynomial lambda: (A, B) -> (l^2 A, l^3 B).
template <typename K>
SurfaceModel<K> quadratic_twist(const SurfaceModel<K>& S, const Polynomial<K>& lambda) {
    auto sf = to_short_form(S);
    return SurfaceModel<K>::make_short(lambda * lambda * sf.model.A(),
                                       lambda * lambda * lambda * sf.model.B());
}

// t -> c t (c nonzero constant).
template <typename K>
SurfaceModel<K> rescale_t(const SurfaceModel<K>& S, const K& c) {
    SurfaceModel<K> out = S;
    for (auto& p : out.coeffs) p = p.compose(Polynomial<K>{zero_like(c), c});
    return out;
}

// Specialization of a family over K = F(parameter) at a parameter value.
// Throws NeedsRenormalization when a coefficient has a pole there or the
// specialized discriminant vanishes identically.
template <typename F>
SurfaceModel<F> specialize(const SurfaceModel<RationalFunction<F>>& S, const F& value) {
    SurfaceModel<F> out;
    out.form = static_cast<typename SurfaceModel<F>::Form>(S.form);
    for (const auto& p : S.coeffs) {
        std::vector<F> c;
        for (int i = 0; i <= p.degree(); ++i) {
            const auto& cf = p.coeff(static_cast<std::size_t>(i));
            F den = cf.den().evaluate(value);
            if (is_zero(den)) raise(errc::needs_renormalization, "coefficient pole at value");
            c.push_back(cf.num().evaluate(value) * inv(den));
        }
        out.coeffs.push_back(Polynomial<F>(std::move(c)));
    }
    // A specialization with identically-zero discriminant needs a chart.
    auto sf = to_short_form(out);
    Polynomial<F> delta = rat_scale(
        rat_scale(sf.model.A() * sf.model.A() * sf.model.A(), Rat(4)) +
            rat_scale(sf.model.B() * sf.model.B(), Rat(27)),
        Rat(-16));
    if (delta.is_zero_poly())
        raise(errc::needs_renormalization, "specialized model is degenerate");
    return out;
}

}  // namespace k3shim

#endif
