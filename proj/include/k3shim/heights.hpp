// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_HEIGHTS_HPP
#define K3SHIM_HEIGHTS_HPP

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "k3shim/elliptic.hpp"
#include "k3shim/tate.hpp"

namespace k3shim {

// A section of an elliptic surface, in the coordinates of its home model.
template <typename K>
struct Section {
    RationalFunction<K> X, Y;
};

// One local canonical-height correction.
struct LocalCorrection {
    std::string place;      // printable place description
    std::string fiber;      // Kodaira type
    int component;          // In: cycle distance; I*: 0 none, 1 near, 2 far;
                            // others: 0/1
    Rat value;              // per geometric point
    int place_degree = 1;   // multiplies value in the total
};

// Canonical height h = 2*chi + 2 (P.O) - sum of local corrections, chi = 2.
struct HeightBreakdown {
    Rat naive;  // 4 + 2 (P.O)
    long po = 0;
    std::vector<LocalCorrection> corrections;
    Rat height;
    bool torsion = false;
};

namespace height_detail {

// X in the chart at infinity: u^4 X(1/u) as a rational function of u.
template <typename K>
RationalFunction<K> x_infinity_chart(const RationalFunction<K>& X) {
    if (X.is_zero_fn()) return X;
    int n = X.num().degree(), d = X.den().degree();
    auto Nrev = X.num().reversed(n);
    auto Drev = X.den().reversed(d);
    int e = 4 + d - n;
    const K one = one_like(X.num().lc());
    if (e >= 0)
        return RationalFunction<K>(Polynomial<K>::monomial(one, e) * Nrev, Drev);
    return RationalFunction<K>(Nrev, Polynomial<K>::monomial(one, -e) * Drev);
}

// Local data of the short model at a reducible place, expanded over the
// residue field R of the place to `prec` coefficients.
template <typename K, typename R>
struct LocalModel {
    TruncatedSeries<R> A, B, X;
    bool x_finite;  // no pole of X at the place
    R one;
};

template <typename K>
Polynomial<QuotientField<K>> embed_poly(const Polynomial<K>& p,
                                        const std::shared_ptr<const Polynomial<K>>& pi) {
    std::vector<QuotientField<K>> c;
    for (int i = 0; i <= p.degree(); ++i)
        c.emplace_back(Polynomial<K>{p.coeff(i)}, pi);
    return Polynomial<QuotientField<K>>(std::move(c));
}

template <typename F>
TruncatedSeries<F> series_of_ratfun(const RationalFunction<F>& x, const F& t0,
                                    std::size_t prec) {
    auto n = TruncatedSeries<F>::of_polynomial(x.num(), t0, prec);
    auto d = TruncatedSeries<F>::of_polynomial(x.den(), t0, prec);
    return n / d;
}

// Correction for a multiplicative fiber I_n, n >= 2, from the valuation of
// X - x_s against the node-center branch x_s.
template <typename R>
std::pair<int, Rat> in_correction(const TruncatedSeries<R>& A, const TruncatedSeries<R>& B,
                                  const TruncatedSeries<R>& X, int n) {
    const R one = one_like(A.coeff(0));
    const R three = one + one + one;
    // Double root of the reduced cubic: x0 = -3 B0 / (2 A0).
    R A0 = A.coeff(0), B0 = B.coeff(0);
    R x0 = -(three * B0) * inv((one + one) * A0);
    // Node-center branch: the critical point of z^3 + A z + B near x0.
    std::vector<TruncatedSeries<R>> dcoeffs = {A, TruncatedSeries<R>(A.point(), {}, A.order()),
                                               TruncatedSeries<R>(A.point(), {three}, A.order())};
    auto xs = series_poly_root(dcoeffs, x0);
    auto diff = X - xs;
    std::size_t mu = diff.valuation();
    int i;
    if (2 * static_cast<long>(mu) >= n) {
        if (n % 2) raise(errc::internal_error, "odd-n middle component cannot be reached");
        i = n / 2;
    } else {
        i = static_cast<int>(mu);
    }
    return {i, make_rat(static_cast<long>(i) * (n - i), n)};
}

// Correction for I_n*: near leaf 1, far leaves 1 + n/4, decided by whether
// the section reduces onto the simple or the double root of the untwisted
// cubic z^3 + A2 z + B3.
template <typename R>
std::pair<int, Rat> instar_correction(const TruncatedSeries<R>& A, const TruncatedSeries<R>& B,
                                      const TruncatedSeries<R>& X, int n) {
    if (X.valuation() < 1) return {0, Rat(0)};
    R x1 = X.order() > 1 ? X.coeff(1) : zero_like(X.coeff(0));
    R A2 = A.coeff(2), B3 = B.coeff(3);
    R w = x1 * x1 * x1 + A2 * x1 + B3;
    if (!is_zero(w))
        raise(errc::internal_error, "section through the cusp misses the untwisted cubic");
    const R one = one_like(A2);
    R wprime = (one + one + one) * x1 * x1 + A2;
    if (!is_zero(wprime)) return {1, Rat(1)};
    return {2, Rat(1) + make_rat(n, 4)};
}

template <typename R, typename K>
std::optional<LocalCorrection> correction_at(const TruncatedSeries<R>& A,
                                             const TruncatedSeries<R>& B,
                                             const TruncatedSeries<R>& X, bool x_has_pole,
                                             const FiberDatum<K>& f) {
    if (!f.contribution) return std::nullopt;
    LocalCorrection c;
    c.place = f.place.str();
    c.fiber = f.type.str();
    c.place_degree = f.place.degree();
    if (x_has_pole) {
        c.component = 0;
        c.value = Rat(0);
        return c;
    }
    switch (f.type.kind) {
        case KodairaKind::In: {
            auto [i, v] = in_correction(A, B, X, f.type.n);
            c.component = i;
            c.value = v;
            break;
        }
        case KodairaKind::Instar: {
            auto [i, v] = instar_correction(A, B, X, f.type.n);
            c.component = i;
            c.value = v;
            break;
        }
        case KodairaKind::II:
        case KodairaKind::IIstar:
            c.component = 0;
            c.value = Rat(0);
            break;
        case KodairaKind::III:
            c.component = X.valuation() >= 1 ? 1 : 0;
            c.value = c.component ? make_rat(1, 2) : Rat(0);
            break;
        case KodairaKind::IV:
            c.component = X.valuation() >= 1 ? 1 : 0;
            c.value = c.component ? make_rat(2, 3) : Rat(0);
            break;
        case KodairaKind::IVstar:
            c.component = X.valuation() >= 1 ? 1 : 0;
            c.value = c.component ? make_rat(4, 3) : Rat(0);
            break;
        case KodairaKind::IIIstar:
            c.component = X.valuation() >= 2 ? 1 : 0;
            c.value = c.component ? make_rat(3, 2) : Rat(0);
            break;
    }
    return c;
}

}  // namespace height_detail

// Verify a section lies on the surface and compute its canonical height with
// the full local breakdown.  The fiber configuration may be supplied to avoid
// recomputation.
template <typename K>
HeightBreakdown verify_section(const SurfaceModel<K>& S, const Section<K>& sec,
                               const FiberConfiguration<K>* config = nullptr) {
    using RF = RationalFunction<K>;
    auto sf = to_short_form(S);
    const auto& A = sf.model.A();
    const auto& B = sf.model.B();

    // Transport to short coordinates.
    RF X = sec.X + RF(sf.map.sx);
    RF Y = sec.Y + RF(sf.map.y_lin) * sec.X + RF(sf.map.y_const);

    // On-surface identity in K(t).
    RF rhs = X * X * X + RF(A) * X + RF(B);
    if (!(Y * Y == rhs)) raise(errc::not_a_section, "Y^2 != X^3 + A X + B");

    FiberConfiguration<K> local_cfg;
    if (!config) {
        local_cfg = fiber_configuration(S);
        config = &local_cfg;
    }

    HeightBreakdown out;

    // Intersection with the zero section: half the pole degree of X, chart-
    // adjusted at infinity.
    long po2 = 0;  // twice P.O
    if (!X.is_zero_fn()) {
        auto den_sqf = squarefree_decomposition(X.den());
        for (std::size_t i = 0; i < den_sqf.size(); ++i)
            if (den_sqf[i].degree() > 0) po2 += static_cast<long>(i + 1) * den_sqf[i].degree();
        long e_inf = 4 + X.den().degree() - X.num().degree();
        if (e_inf < 0) po2 += -e_inf;
    }
    if (po2 % 2) raise(errc::not_a_section, "odd pole degree of X");
    out.po = po2 / 2;
    out.naive = Rat(4 + po2);

    // Local corrections at each reducible fiber.
    for (const auto& f : config->fibers) {
        if (!f.contribution) continue;
        int prec = std::max(static_cast<int>(f.type.euler()) / 2 + 3, 6);
        std::optional<LocalCorrection> c;
        if (f.place.at_infinity) {
            auto Ai = A.reversed(8);
            auto Bi = B.reversed(12);
            RF Xi = height_detail::x_infinity_chart(X);
            K zero = zero_like(sf.model.sample());
            bool pole = !Xi.is_zero_fn() && is_zero(Xi.den().evaluate(zero));
            auto As = TruncatedSeries<K>::of_polynomial(Ai, zero, prec);
            auto Bs = TruncatedSeries<K>::of_polynomial(Bi, zero, prec);
            auto Xs = pole ? TruncatedSeries<K>(SeriesPoint<K>{false, zero}, {}, prec)
                           : height_detail::series_of_ratfun(Xi, zero, prec);
            c = height_detail::correction_at(As, Bs, Xs, pole, f);
        } else if (f.place.is_rational_finite()) {
            K t0 = f.place.root();
            bool pole = !X.is_zero_fn() && is_zero(X.den().evaluate(t0));
            auto As = TruncatedSeries<K>::of_polynomial(A, t0, prec);
            auto Bs = TruncatedSeries<K>::of_polynomial(B, t0, prec);
            auto Xs = pole ? TruncatedSeries<K>(SeriesPoint<K>{false, t0}, {}, prec)
                           : height_detail::series_of_ratfun(X, t0, prec);
            c = height_detail::correction_at(As, Bs, Xs, pole, f);
        } else {
            // Galois-orbit place: work over the residue field K[t]/(pi).
            using QF = QuotientField<K>;
            auto pi = std::make_shared<const Polynomial<K>>(f.place.pi);
            QF theta = QF::generator(pi);
            auto Ae = height_detail::embed_poly(A, pi);
            auto Be = height_detail::embed_poly(B, pi);
            bool pole = false;
            TruncatedSeries<QF> Xs(SeriesPoint<QF>{false, theta}, {}, prec);
            if (!X.is_zero_fn()) {
                auto Ne = height_detail::embed_poly(X.num(), pi);
                auto De = height_detail::embed_poly(X.den(), pi);
                pole = is_zero(De.evaluate(theta));
                if (!pole) {
                    auto ns = TruncatedSeries<QF>::of_polynomial(Ne, theta, prec);
                    auto ds = TruncatedSeries<QF>::of_polynomial(De, theta, prec);
                    Xs = ns / ds;
                }
            }
            auto As = TruncatedSeries<QF>::of_polynomial(Ae, theta, prec);
            auto Bs = TruncatedSeries<QF>::of_polynomial(Be, theta, prec);
            FiberDatum<QF> fq;
            fq.type = f.type;
            fq.contribution = f.contribution;
            fq.place.at_infinity = false;
            fq.place.pi = Polynomial<QF>{-theta, one_like(theta)};
            auto cq = height_detail::correction_at(As, Bs, Xs, pole, fq);
            if (cq) {
                cq->place = f.place.str();
                cq->place_degree = f.place.degree();
                c = cq;
            }
        }
        if (c) out.corrections.push_back(*c);
    }

    Rat total(0);
    for (const auto& c : out.corrections) total += Rat(c.place_degree) * c.value;
    out.height = out.naive - total;
    out.torsion = is_zero(out.height);
    if (sgn(out.height) < 0)
        raise(errc::internal_error, "negative canonical height: " + rat_to_string(out.height));
    return out;
}

// Sum of two sections through the generic-fiber group law (in the home
// model's coordinates, via the short form).  Returns nullopt for the zero
// section.
template <typename K>
std::optional<Section<K>> section_sum(const SurfaceModel<K>& S, const Section<K>& P,
                                      const Section<K>& Q) {
    using RF = RationalFunction<K>;
    auto sf = to_short_form(S);
    RF A(sf.model.A()), B(sf.model.B());
    WeierstrassCurve<RF> E{{RF(0), RF(0), RF(0), A, B}};
    auto lift = [&](const Section<K>& s) {
        RF X = s.X + RF(sf.map.sx);
        RF Y = s.Y + RF(sf.map.y_lin) * s.X + RF(sf.map.y_const);
        return EllipticCurvePoint<RF>(E, X, Y);
    };
    auto sum = ec_add(lift(P), lift(Q));
    if (sum.is_infinity()) return std::nullopt;
    // Back to home coordinates.
    RF X = sum.x() - RF(sf.map.sx);
    RF Y = sum.y() - RF(sf.map.y_lin) * X - RF(sf.map.y_const);
    return Section<K>{X, Y};
}

// Height pairing <P,Q> = (h(P+Q) - h(P) - h(Q)) / 2.
template <typename K>
Rat height_pairing(const SurfaceModel<K>& S, const Section<K>& P, const Section<K>& Q,
                   const FiberConfiguration<K>* config = nullptr) {
    Rat hP = verify_section(S, P, config).height;
    Rat hQ = verify_section(S, Q, config).height;
    if (P.X == Q.X && P.Y == Q.Y) return hP;
    auto sum = section_sum(S, P, Q);
    Rat hPQ = sum ? verify_section(S, *sum, config).height : Rat(0);
    return (hPQ - hP - hQ) / 2;
}

// Gram matrix of a set of sections under the canonical height pairing.
template <typename K>
std::vector<std::vector<Rat>> height_gram(const SurfaceModel<K>& S,
                                          const std::vector<Section<K>>& sections,
                                          const FiberConfiguration<K>* config = nullptr) {
    std::size_t n = sections.size();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rat v = height_pairing(S, sections[i], sections[j], config);
            g[i][j] = v;
            g[j][i] = v;
        }
    return g;
}

inline Rat det_rat(std::vector<std::vector<Rat>> m) {
    std::size_t n = m.size();
    Rat det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(m[p][c]) == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Rat f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// |disc NS| = disc(R) * Reg(MW) / tau^2.
template <typename K>
Rat ns_discriminant(const SurfaceModel<K>& S, const FiberConfiguration<K>& config,
                    const std::vector<Section<K>>& mw_basis, long torsion_order = 1) {
    Rat reg(1);
    if (!mw_basis.empty()) {
        reg = det_rat(height_gram(S, mw_basis, &config));
        if (is_zero(reg)) raise(errc::dependent_sections, "singular Mordell-Weil Gram matrix");
    }
    return Rat(config.root_disc()) * reg / Rat(torsion_order * torsion_order);
}

// ---- budget arithmetic without a surface ------------------------------------

// Component choice in one simple factor: A_n uses the cycle index
// 0..n (0 = identity); D_n uses 0 none, 1 near, 2 far; E6/E7 use 0/1;
// E8 only 0.
struct ComponentChoice {
    RootLattice lattice;
    int index = 0;
};

inline Rat component_contribution(const ComponentChoice& c) {
    const auto& [lat, idx] = c;
    switch (lat.kind) {
        case RootKind::A: {
            // A_n arises from I_{n+1}; valid indices 0..n.
            if (idx < 0 || idx > lat.n) raise(errc::invalid_assignment, "A_n component index");
            long m = lat.n + 1;
            return make_rat(static_cast<long>(idx) * (m - idx), m);
        }
        case RootKind::D: {
            // D_n arises from I_{n-4}*.
            if (idx == 0) return Rat(0);
            if (idx == 1) return Rat(1);
            if (idx == 2) return Rat(1) + make_rat(lat.n - 4, 4);
            raise(errc::invalid_assignment, "D_n component index");
        }
        case RootKind::E: {
            if (idx == 0) return Rat(0);
            if (idx == 1) {
                if (lat.n == 6) return make_rat(4, 3);
                if (lat.n == 7) return make_rat(3, 2);
                raise(errc::invalid_assignment, "E8 has no non-identity simple component");
            }
            raise(errc::invalid_assignment, "E_n component index");
        }
    }
    raise(errc::invalid_assignment, "unknown lattice kind");
}

inline Rat minimal_section_height(const std::vector<ComponentChoice>& assignment, long po) {
    Rat h = Rat(4 + 2 * po);
    for (const auto& c : assignment) h -= component_contribution(c);
    return h;
}

// ---- the local A_n / D_n construction lemma ---------------------------------

struct AbcReport {
    long nu;
    long mu;       // valuation of b^2 - a c (kNoMu when that polynomial is 0)
    long v_delta;
    bool always_clause;   // v(Delta) >= 2 nu
    bool small_mu_clause; // mu < nu  =>  v(Delta) = 2 nu + mu
};

// For the extended form Y^2 = X^3 + a X^2 + 2 b X + c with v(b) = nu and
// v(c) = 2 nu at t0.
template <typename K>
AbcReport abc_trick_check(const Polynomial<K>& a, const Polynomial<K>& b, const Polynomial<K>& c,
                          const K& t0) {
    constexpr long kInf = tate_detail::kInf;
    if (b.is_zero_poly() || c.is_zero_poly())
        raise(errc::precondition_violated, "b or c vanishes identically; nu undefined");
    Polynomial<K> pi{-t0, one_like(t0)};
    long nu = factor_multiplicity(b, pi);
    long vc = factor_multiplicity(c, pi);
    if (vc != 2 * nu)
        raise(errc::precondition_violated, "valuation pattern v(c) = 2 v(b) fails");
    Polynomial<K> disc_input = b * b - a * c;
    long mu = disc_input.is_zero_poly() ? kInf : factor_multiplicity(disc_input, pi);
    auto S = SurfaceModel<K>::make_extended(a, rat_scale(b, Rat(2)), c);
    auto dd = surface_discriminant(S);
    long vd = factor_multiplicity(dd.delta, pi);
    AbcReport rep;
    rep.nu = nu;
    rep.mu = mu;
    rep.v_delta = vd;
    rep.always_clause = vd >= 2 * nu;
    rep.small_mu_clause = (mu >= nu) || (vd == 2 * nu + mu);
    return rep;
}

}  // namespace k3shim

#endif
