// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_SERIES_HPP
#define K3SHIM_SERIES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "k3shim/polynomial.hpp"

namespace k3shim {

// Expansion point of a truncated series: a finite point t0 or infinity
// (series in u = 1/t).
template <typename F>
struct SeriesPoint {
    bool at_infinity = false;
    F t0{};
    friend bool operator==(const SeriesPoint& a, const SeriesPoint& b) {
        return a.at_infinity == b.at_infinity && (a.at_infinity || a.t0 == b.t0);
    }
};

// Truncated power series: coefficients c[0..order-1] represent
// sum c_i x^i + O(x^order) in the local coordinate x at the expansion point.
// Arithmetic is closed at the minimum truncation order of the operands, so
// precision loss is explicit in the `order()` of every result.
template <typename F>
class TruncatedSeries {
  public:
    TruncatedSeries(SeriesPoint<F> pt, std::vector<F> coeffs, std::size_t order)
        : pt_(std::move(pt)), c_(std::move(coeffs)) {
        c_.resize(order, pad());
    }
    static TruncatedSeries at_zero(std::vector<F> coeffs, std::size_t order) {
        return TruncatedSeries(SeriesPoint<F>{}, std::move(coeffs), order);
    }
    static TruncatedSeries constant(const F& c, std::size_t order) {
        return at_zero(std::vector<F>{c}, order);
    }
    // Expansion of a polynomial about t0 (local coordinate x = t - t0).
    static TruncatedSeries of_polynomial(const Polynomial<F>& p, const F& t0, std::size_t order) {
        Polynomial<F> sh = p.shifted(t0);  // sh(x) = p(x + t0)
        std::vector<F> c;
        for (std::size_t i = 0; i < order; ++i) c.push_back(sh.coeff(i));
        return TruncatedSeries(SeriesPoint<F>{false, t0}, std::move(c), order);
    }

    std::size_t order() const { return c_.size(); }
    const SeriesPoint<F>& point() const { return pt_; }
    const F& coeff(std::size_t i) const { return c_.at(i); }
    const std::vector<F>& coeffs() const { return c_; }

    // Valuation: index of first nonzero coefficient; order() if none visible.
    std::size_t valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!is_zero(c_[i])) return i;
        return c_.size();
    }

    TruncatedSeries truncated(std::size_t order) const {
        TruncatedSeries r = *this;
        r.c_.resize(std::min(order, r.c_.size()), pad());
        return r;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        std::size_t n = a.match(b);
        std::vector<F> c(n, a.pad());
        for (std::size_t i = 0; i < n; ++i) c[i] = a.c_[i] + b.c_[i];
        return TruncatedSeries(a.pt_, std::move(c), n);
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a + (-b);
    }
    TruncatedSeries operator-() const {
        std::vector<F> c;
        c.reserve(c_.size());
        for (const auto& x : c_) c.push_back(-x);
        return TruncatedSeries(pt_, std::move(c), c_.size());
    }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        std::size_t n = a.match(b);
        std::vector<F> c(n, a.pad());
        for (std::size_t i = 0; i < n && i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; i + j < n && j < b.c_.size(); ++j)
                c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        }
        return TruncatedSeries(a.pt_, std::move(c), n);
    }
    friend TruncatedSeries operator*(const F& s, const TruncatedSeries& a) {
        std::vector<F> c;
        c.reserve(a.c_.size());
        for (const auto& x : a.c_) c.push_back(s * x);
        return TruncatedSeries(a.pt_, std::move(c), a.c_.size());
    }

    // Division by a unit series (nonzero constant term).
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
        std::size_t n = a.match(b);
        if (n == 0 || is_zero(b.c_[0]))
            raise(errc::invalid_argument, "series division by non-unit");
        F binv = inv(b.c_[0]);
        std::vector<F> c(n, a.pad());
        for (std::size_t i = 0; i < n; ++i) {
            F acc = i < a.c_.size() ? a.c_[i] : a.pad();
            for (std::size_t j = 1; j <= i && j < b.c_.size(); ++j)
                acc = acc - b.c_[j] * c[i - j];
            c[i] = acc * binv;
        }
        return TruncatedSeries(a.pt_, std::move(c), n);
    }

    // Multiply by x^k (shifts coefficients up; top coefficients fall off the
    // truncation, so the order is unchanged).
    TruncatedSeries shifted_up(std::size_t k) const {
        std::vector<F> c(c_.size(), pad());
        for (std::size_t i = 0; i + k < c_.size(); ++i) c[i + k] = c_[i];
        return TruncatedSeries(pt_, std::move(c), c_.size());
    }

    // Exact division by x^k; requires valuation >= k and costs k orders.
    TruncatedSeries shifted_down(std::size_t k) const {
        if (valuation() < k) raise(errc::invalid_argument, "series not divisible by x^k");
        std::vector<F> c(c_.begin() + k, c_.end());
        return TruncatedSeries(pt_, std::move(c), c_.size());
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        std::size_t n = a.match(b);
        for (std::size_t i = 0; i < n; ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }

  private:
    std::size_t match(const TruncatedSeries& o) const {
        if (!(pt_ == o.pt_)) raise(errc::invalid_argument, "series expansion point mismatch");
        return std::min(c_.size(), o.c_.size());
    }
    F pad() const {
        if (!c_.empty()) return zero_like(c_[0]);
        return F();
    }

    SeriesPoint<F> pt_;
    std::vector<F> c_;
};

// Square root of a series whose constant term is a nonzero square.
template <typename F>
TruncatedSeries<F> series_sqrt(const TruncatedSeries<F>& f) {
    std::size_t n = f.order();
    if (n == 0) raise(errc::invalid_argument, "empty series");
    if (is_zero(f.coeff(0)))
        raise(errc::no_square_root_at_point, "constant term vanishes");
    auto s0 = field_sqrt(f.coeff(0));
    if (!s0) raise(errc::no_square_root_at_point, "constant term is not a square");
    std::vector<F> g(n, zero_like(f.coeff(0)));
    g[0] = *s0;
    F two = one_like(*s0) + one_like(*s0);
    F d = inv(two * g[0]);
    for (std::size_t k = 1; k < n; ++k) {
        F acc = f.coeff(k);
        for (std::size_t i = 1; i < k; ++i) acc = acc - g[i] * g[k - i];
        g[k] = acc * d;
    }
    return TruncatedSeries<F>(f.point(), std::move(g), n);
}

// Newton iteration for a root of poly (in X) starting from a simple root x0 of
// its reduction; coefficients of poly are series in the base coordinate.
template <typename F>
TruncatedSeries<F> series_poly_root(const std::vector<TruncatedSeries<F>>& poly_coeffs,
                                    const F& x0) {
    if (poly_coeffs.empty()) raise(errc::invalid_argument, "empty polynomial");
    std::size_t n = poly_coeffs[0].order();
    auto pt = poly_coeffs[0].point();
    auto eval = [&](const TruncatedSeries<F>& x, bool derivative) {
        TruncatedSeries<F> acc = TruncatedSeries<F>(pt, {}, n);
        std::size_t d = poly_coeffs.size() - 1;
        if (derivative) {
            for (std::size_t i = d; i >= 1; --i) {
                F mult = zero_like(x0);
                for (std::size_t j = 0; j < i; ++j) mult = mult + one_like(x0);
                acc = acc * x + mult * poly_coeffs[i];
            }
        } else {
            for (std::size_t i = d + 1; i-- > 0;) acc = acc * x + poly_coeffs[i];
        }
        return acc;
    };
    TruncatedSeries<F> x = TruncatedSeries<F>(pt, {x0}, n);
    // Simple-root certificate at order 0.
    {
        auto fp = eval(x, true);
        if (is_zero(fp.coeff(0)))
            raise(errc::invalid_argument, "root is not simple; Newton undefined");
    }
    for (std::size_t it = 0; it < n + 2; ++it) {
        auto fx = eval(x, false);
        if (fx.valuation() >= n) break;
        auto fpx = eval(x, true);
        x = x - fx / fpx;
    }
    auto fx = eval(x, false);
    if (fx.valuation() < n) raise(errc::internal_error, "series Newton failed to converge");
    return x;
}

}  // namespace k3shim

#endif
