// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_ELLIPTIC_HPP
#define K3SHIM_ELLIPTIC_HPP

#include <array>
#include <utility>

#include "k3shim/rational.hpp"

namespace k3shim {

// Long Weierstrass curve y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
// over an exact field F, with the chord-tangent group law.
template <typename F>
struct WeierstrassCurve {
    std::array<F, 5> a;  // a1, a2, a3, a4, a6

    const F& a1() const { return a[0]; }
    const F& a2() const { return a[1]; }
    const F& a3() const { return a[2]; }
    const F& a4() const { return a[3]; }
    const F& a6() const { return a[4]; }

    bool on_curve(const F& x, const F& y) const {
        F lhs = y * y + a1() * x * y + a3() * y;
        F rhs = x * x * x + a2() * x * x + a4() * x + a6();
        return lhs == rhs;
    }

    friend bool operator==(const WeierstrassCurve& u, const WeierstrassCurve& v) {
        return u.a == v.a;
    }
};

template <typename F>
class EllipticCurvePoint {
  public:
    static EllipticCurvePoint infinity(WeierstrassCurve<F> curve) {
        EllipticCurvePoint p(std::move(curve));
        p.inf_ = true;
        return p;
    }
    EllipticCurvePoint(WeierstrassCurve<F> curve, F x, F y)
        : curve_(std::move(curve)), x_(std::move(x)), y_(std::move(y)) {
        if (!curve_.on_curve(x_, y_)) raise(errc::invalid_argument, "point not on curve");
    }

    bool is_infinity() const { return inf_; }
    const F& x() const {
        if (inf_) raise(errc::invalid_argument, "x of point at infinity");
        return x_;
    }
    const F& y() const {
        if (inf_) raise(errc::invalid_argument, "y of point at infinity");
        return y_;
    }
    const WeierstrassCurve<F>& curve() const { return curve_; }

    friend bool operator==(const EllipticCurvePoint& p, const EllipticCurvePoint& q) {
        if (p.inf_ || q.inf_) return p.inf_ == q.inf_;
        return p.x_ == q.x_ && p.y_ == q.y_;
    }

  private:
    explicit EllipticCurvePoint(WeierstrassCurve<F> curve) : curve_(std::move(curve)) {}
    WeierstrassCurve<F> curve_;
    F x_{}, y_{};
    bool inf_ = false;
};

template <typename F>
EllipticCurvePoint<F> ec_neg(const EllipticCurvePoint<F>& p) {
    if (p.is_infinity()) return p;
    const auto& c = p.curve();
    return EllipticCurvePoint<F>(c, p.x(), -p.y() - c.a1() * p.x() - c.a3());
}

template <typename F>
EllipticCurvePoint<F> ec_add(const EllipticCurvePoint<F>& p, const EllipticCurvePoint<F>& q) {
    if (!(p.curve() == q.curve())) raise(errc::invalid_argument, "points on different curves");
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    const auto& c = p.curve();
    const F &x1 = p.x(), &y1 = p.y(), &x2 = q.x(), &y2 = q.y();
    if (x1 == x2 && is_zero(y1 + y2 + c.a1() * x2 + c.a3()))
        return EllipticCurvePoint<F>::infinity(c);
    F lam, nu;
    if (x1 == x2) {
        F d = y1 + y1 + c.a1() * x1 + c.a3();
        F x1sq = x1 * x1;
        lam = (x1sq + x1sq + x1sq + (c.a2() + c.a2()) * x1 + c.a4() - c.a1() * y1) * inv(d);
        nu = (-(x1sq * x1) + c.a4() * x1 + c.a6() + c.a6() - c.a3() * y1) * inv(d);
    } else {
        F d = inv(x2 - x1);
        lam = (y2 - y1) * d;
        nu = (y1 * x2 - y2 * x1) * d;
    }
    F x3 = lam * lam + c.a1() * lam - c.a2() - x1 - x2;
    F y3 = -(lam + c.a1()) * x3 - nu - c.a3();
    return EllipticCurvePoint<F>(c, x3, y3);
}

template <typename F>
EllipticCurvePoint<F> ec_multiple(const EllipticCurvePoint<F>& p, long n) {
    if (n == 0) return EllipticCurvePoint<F>::infinity(p.curve());
    EllipticCurvePoint<F> base = n > 0 ? p : ec_neg(p);
    unsigned long m = n > 0 ? static_cast<unsigned long>(n) : static_cast<unsigned long>(-n);
    EllipticCurvePoint<F> acc = EllipticCurvePoint<F>::infinity(p.curve());
    while (m) {
        if (m & 1) acc = ec_add(acc, base);
        base = ec_add(base, base);
        m >>= 1;
    }
    return acc;
}

}  // namespace k3shim

#endif
