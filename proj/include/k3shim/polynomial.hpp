// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_POLYNOMIAL_HPP
#define K3SHIM_POLYNOMIAL_HPP

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "k3shim/rational.hpp"

namespace k3shim {

// Univariate polynomial over a commutative ring R, dense ascending
// coefficients, highest-index coefficient nonzero (zero polynomial = empty).
//
// Ring constants are obtained from operand samples via zero_like/one_like, so
// R may carry runtime context (a modulus, a defining polynomial).  Operations
// that need inverses require R to be a field.
template <typename R>
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(const R& constant) : c_{constant} { trim(); }

    template <typename S = R>
    static Polynomial from_ints(const std::vector<long>& v) {
        std::vector<S> c;
        c.reserve(v.size());
        for (long x : v) c.push_back(S(x));
        return Polynomial(std::move(c));
    }

    static Polynomial monomial(const R& coeff, std::size_t degree) {
        if (is_zero(coeff)) return Polynomial();
        std::vector<R> c(degree + 1, zero_like(coeff));
        c[degree] = coeff;
        return Polynomial(std::move(c));
    }

    bool is_zero_poly() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<R>& coeffs() const { return c_; }

    const R& lc() const {
        if (c_.empty()) raise(errc::invalid_argument, "leading coefficient of zero polynomial");
        return c_.back();
    }

    // Coefficient access beyond the stored range yields ring zero (a sample is
    // required for context-carrying rings).
    R coeff(std::size_t i) const {
        if (i < c_.size()) return c_[i];
        if (!c_.empty()) return zero_like(c_[0]);
        return R();
    }

    R sample() const {
        if (c_.empty()) return R();
        return c_[0];
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<R> c(std::max(a.c_.size(), b.c_.size()),
                         !a.c_.empty() ? zero_like(a.c_[0])
                                       : (!b.c_.empty() ? zero_like(b.c_[0]) : R()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < a.c_.size() && i < b.c_.size())
                c[i] = a.c_[i] + b.c_[i];
            else if (i < a.c_.size())
                c[i] = a.c_[i];
            else
                c[i] = b.c_[i];
        }
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    Polynomial operator-() const {
        std::vector<R> c;
        c.reserve(c_.size());
        for (const auto& x : c_) c.push_back(-x);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.c_.empty() || b.c_.empty()) return Polynomial();
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, zero_like(a.c_[0]));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const R& s, const Polynomial& p) {
        if (is_zero(s)) return Polynomial();
        std::vector<R> c;
        c.reserve(p.c_.size());
        for (const auto& x : p.c_) c.push_back(s * x);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& p, const R& s) { return s * p; }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    template <typename T>
    T evaluate(const T& x) const {
        if (c_.empty()) return zero_like(x) * T(x);  // zero of the evaluation ring
        T acc = make_scalar(c_.back(), x);
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + make_scalar(c_[i], x);
        return acc;
    }

    R evaluate(const R& x) const {
        if (c_.empty()) return zero_like(x);
        R acc = c_.back();
        for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<R> c;
        c.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) {
            R m = zero_like(c_[i]);
            R one = one_like(c_[i]);
            for (std::size_t j = 0; j < i; ++j) m = m + one;
            c.push_back(m * c_[i]);
        }
        return Polynomial(std::move(c));
    }

    // t -> t + a
    Polynomial shifted(const R& a) const {
        Polynomial t{a, one_like(a)};
        return compose(t);
    }

    // t -> c*t
    Polynomial scaled_t(const R& c) const {
        if (c_.empty()) return Polynomial();
        std::vector<R> out = c_;
        R f = one_like(c);
        for (std::size_t i = 1; i < out.size(); ++i) {
            f = f * c;
            out[i] = out[i] * f;
        }
        return Polynomial(std::move(out));
    }

    // Reversal t -> 1/t homogenized to degree d: returns t^d * f(1/t).
    Polynomial reversed(std::size_t d) const {
        if (static_cast<int>(d) < degree())
            raise(errc::invalid_argument, "reversal degree below polynomial degree");
        if (c_.empty()) return Polynomial();
        std::vector<R> out(d + 1, zero_like(c_[0]));
        for (std::size_t i = 0; i < c_.size(); ++i) out[d - i] = c_[i];
        return Polynomial(std::move(out));
    }

    Polynomial compose(const Polynomial& g) const {
        Polynomial acc;
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * g + Polynomial(c_[i]);
        }
        return acc;
    }

    Polynomial pow(unsigned long e) const {
        if (e == 0) {
            if (c_.empty()) raise(errc::invalid_argument, "0^0 polynomial");
            return Polynomial(one_like(c_[0]));
        }
        Polynomial base = *this, acc;
        bool first = true;
        while (e) {
            if (e & 1) {
                acc = first ? base : acc * base;
                first = false;
            }
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::string str(const std::string& var = "t") const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (is_zero(c_[i])) continue;
            if (!first) os << " + ";
            os << "(" << coeff_str(c_[i]) << ")";
            if (i > 0) os << "*" << var;
            if (i > 1) os << "^" << i;
            first = false;
        }
        return os.str();
    }

  private:
    static std::string coeff_str(const Rat& x) { return rat_to_string(x); }
    template <typename X>
    static std::string coeff_str(const X&) {
        return "?";
    }
    template <typename T>
    static T make_scalar(const R& c, const T& like) {
        return zero_like(like) + T(c);
    }
    static R make_scalar(const R& c, const R&) { return c; }

    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }

    std::vector<R> c_;
};

template <typename R>
bool is_zero(const Polynomial<R>& p) {
    return p.is_zero_poly();
}
template <typename R>
Polynomial<R> zero_like(const Polynomial<R>&) {
    return Polynomial<R>();
}
template <typename R>
Polynomial<R> one_like(const Polynomial<R>& p) {
    if (p.is_zero_poly()) raise(errc::invalid_argument, "one_like of zero polynomial");
    return Polynomial<R>(one_like(p.sample()));
}

// ---- field-coefficient algorithms ------------------------------------------

// Division with remainder over a field: a = q*b + r, deg r < deg b.
template <typename F>
std::pair<Polynomial<F>, Polynomial<F>> divmod(const Polynomial<F>& a, const Polynomial<F>& b) {
    if (b.is_zero_poly()) raise(errc::invalid_argument, "polynomial division by zero");
    if (a.is_zero_poly() || a.degree() < b.degree()) return {Polynomial<F>(), a};
    F binv = inv(b.lc());
    std::vector<F> rem(a.coeffs());
    std::vector<F> quo(a.degree() - b.degree() + 1, zero_like(a.lc()));
    for (int i = a.degree(); i >= b.degree(); --i) {
        if (is_zero(rem[i])) continue;
        F q = rem[i] * binv;
        quo[i - b.degree()] = q;
        for (int j = 0; j <= b.degree(); ++j) {
            rem[i - b.degree() + j] = rem[i - b.degree() + j] - q * b.coeff(j);
        }
    }
    return {Polynomial<F>(std::move(quo)), Polynomial<F>(std::move(rem))};
}

template <typename F>
Polynomial<F> operator/(const Polynomial<F>& a, const Polynomial<F>& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero_poly()) raise(errc::invalid_argument, "inexact polynomial division");
    return q;
}

template <typename F>
Polynomial<F> operator%(const Polynomial<F>& a, const Polynomial<F>& b) {
    return divmod(a, b).second;
}

template <typename F>
Polynomial<F> make_monic(const Polynomial<F>& a) {
    if (a.is_zero_poly()) return a;
    return inv(a.lc()) * a;
}

template <typename F>
Polynomial<F> poly_gcd(Polynomial<F> a, Polynomial<F> b) {
    while (!b.is_zero_poly()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

// Pseudo-remainder over a commutative ring: some power of lc(b) times a,
// reduced mod b, computed without fractions.
template <typename R>
Polynomial<R> pseudo_rem(Polynomial<R> a, const Polynomial<R>& b) {
    if (b.is_zero_poly()) raise(errc::invalid_argument, "pseudo-division by zero");
    while (!a.is_zero_poly() && a.degree() >= b.degree()) {
        Polynomial<R> shift = Polynomial<R>::monomial(a.lc(), a.degree() - b.degree());
        a = b.lc() * a - shift * b;
    }
    return a;
}

// Fast gcd over Q: clear denominators and run a primitive pseudo-remainder
// sequence over Z, stripping integer content each step.
inline Polynomial<Rat> poly_gcd(const Polynomial<Rat>& a0, const Polynomial<Rat>& b0) {
    if (a0.is_zero_poly()) return make_monic(b0);
    if (b0.is_zero_poly()) return make_monic(a0);
    auto to_primitive = [](const Polynomial<Rat>& p) {
        Int den = 1;
        for (const auto& c : p.coeffs()) den = den / int_gcd(den, c.get_den()) * c.get_den();
        std::vector<Int> v;
        Int content = 0;
        for (const auto& c : p.coeffs()) {
            Rat s = c * Rat(den);
            v.push_back(s.get_num());
            content = int_gcd(content, v.back());
        }
        if (content > 1)
            for (auto& x : v) x /= content;
        return v;
    };
    auto deg = [](const std::vector<Int>& v) { return static_cast<int>(v.size()) - 1; };
    auto strip = [](std::vector<Int>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
        Int content = 0;
        for (const auto& x : v) content = int_gcd(content, x);
        if (content > 1)
            for (auto& x : v) x /= content;
    };
    std::vector<Int> A = to_primitive(a0), B = to_primitive(b0);
    if (deg(A) < deg(B)) std::swap(A, B);
    while (!B.empty() && deg(B) > 0) {
        // primitive pseudo-remainder of A by B
        std::vector<Int> R = A;
        while (static_cast<int>(R.size()) - 1 >= deg(B) && !R.empty()) {
            Int q = R.back();
            Int l = B.back();
            std::size_t off = R.size() - B.size();
            for (std::size_t i = 0; i < R.size(); ++i) R[i] *= l;
            for (std::size_t i = 0; i < B.size(); ++i) R[off + i] -= q * B[i];
            while (!R.empty() && R.back() == 0) R.pop_back();
        }
        strip(R);
        A = std::move(B);
        B = std::move(R);
    }
    if (!B.empty()) return Polynomial<Rat>{Rat(1)};  // nonzero constant remainder
    std::vector<Rat> g;
    for (const auto& x : A) g.emplace_back(make_rat(x, A.back()));
    return Polynomial<Rat>(std::move(g));
}

// Resultant over a field, by the Euclidean remainder sequence.  Convention:
// Res(f, g) = lc(g)^deg(f) * prod f(beta) over the roots beta of g, so
// Res(t - a, t - b) = b - a.
template <typename F>
F resultant(const Polynomial<F>& f0, const Polynomial<F>& g0) {
    if (f0.is_zero_poly() || g0.is_zero_poly()) {
        if (f0.is_zero_poly() && g0.degree() == 0) return one_like(g0.lc());
        if (g0.is_zero_poly() && f0.degree() == 0) return one_like(f0.lc());
        F s = !f0.is_zero_poly() ? zero_like(f0.lc()) : zero_like(g0.lc());
        return s;
    }
    Polynomial<F> f = f0, g = g0;
    F acc = one_like(f.lc());
    bool negate = (f0.degree() % 2) && (g0.degree() % 2);
    while (true) {
        if (g.degree() == 0) {
            // res(f, c) = c^deg f
            F c = g.lc();
            F r = one_like(c);
            for (int i = 0; i < f.degree(); ++i) r = r * c;
            acc = acc * r;
            break;
        }
        auto rem = f % g;
        if (rem.is_zero_poly()) return zero_like(f.lc());
        // res(f,g) = (-1)^{deg f * deg g} lc(g)^{deg f - deg rem} res(g, rem)
        if ((f.degree() % 2) && (g.degree() % 2)) negate = !negate;
        F l = one_like(g.lc());
        for (int i = 0; i < f.degree() - rem.degree(); ++i) l = l * g.lc();
        acc = acc * l;
        f = std::move(g);
        g = std::move(rem);
    }
    return negate ? -acc : acc;
}

// disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f)
template <typename F>
F poly_discriminant(const Polynomial<F>& f) {
    if (f.degree() < 1) raise(errc::invalid_argument, "discriminant needs degree >= 1");
    F r = resultant(f, f.derivative());
    F d = r * inv(f.lc());
    int n = f.degree();
    if (((static_cast<long>(n) * (n - 1)) / 2) % 2) d = -d;
    return d;
}

// Squarefree decomposition (Yun), characteristic zero.  Returns factors
// [g1, g2, ...] with f = lc * prod gi^i, gi squarefree, pairwise coprime.
template <typename F>
std::vector<Polynomial<F>> squarefree_decomposition(const Polynomial<F>& f) {
    std::vector<Polynomial<F>> out;
    if (f.degree() < 1) return out;
    Polynomial<F> fm = make_monic(f);
    Polynomial<F> df = fm.derivative();
    Polynomial<F> a = poly_gcd(fm, df);
    Polynomial<F> b = fm / a;
    Polynomial<F> c = df / a;
    Polynomial<F> d = c - b.derivative();
    while (b.degree() > 0) {
        Polynomial<F> g = poly_gcd(b, d);
        out.push_back(g);
        b = b / g;
        c = d / g;
        d = c - b.derivative();
    }
    return out;
}

template <typename F>
Polynomial<F> squarefree_part(const Polynomial<F>& f) {
    if (f.degree() < 1) return Polynomial<F>(one_like(f.lc()));
    return make_monic(f) / poly_gcd(make_monic(f), f.derivative());
}

// Multiplicity of the factor pi in f (pi nonconstant).
template <typename F>
int factor_multiplicity(const Polynomial<F>& f, const Polynomial<F>& pi) {
    if (pi.degree() < 1) raise(errc::invalid_argument, "constant place polynomial");
    if (f.is_zero_poly()) return -1;  // infinite
    int m = 0;
    Polynomial<F> g = f;
    while (true) {
        auto [q, r] = divmod(g, pi);
        if (!r.is_zero_poly()) break;
        g = q;
        ++m;
    }
    return m;
}

// Exact square root of a polynomial over a field: square-free peeling plus
// exact division, with a leading-coefficient square root from the caller's
// field hook.  Returns the root with "positive" leading coefficient where the
// field has signs (handled by the callers for Q).
template <typename F>
std::optional<Polynomial<F>> poly_sqrt(const Polynomial<F>& f) {
    if (f.is_zero_poly()) return Polynomial<F>();
    if (f.degree() % 2) return std::nullopt;
    auto lc_root = field_sqrt(f.lc());
    if (!lc_root) return std::nullopt;
    Polynomial<F> g = make_monic(f);
    Polynomial<F> s(one_like(f.lc()));
    while (g.degree() > 0) {
        Polynomial<F> u = squarefree_part(g);  // radical of g
        Polynomial<F> u2 = u * u;
        auto [q, r] = divmod(g, u2);
        if (!r.is_zero_poly()) return std::nullopt;
        s = s * u;
        g = q;
    }
    // Residual constant must be 1 (g monic all along).
    Polynomial<F> root = (*lc_root) * s;
    if (!(root * root == f)) return std::nullopt;
    return root;
}

// Rational roots of a polynomial over Q (complete when the leading and
// trailing coefficients factor within the trial-division bound; the cofactor
// is reported so callers can tell).
struct RationalRoots {
    std::vector<Rat> roots;
    bool complete = true;
};

inline RationalRoots rational_roots(const Polynomial<Rat>& f0) {
    RationalRoots out;
    if (f0.degree() < 1) return out;
    // Strip t^k and clear denominators to a primitive integer polynomial.
    Polynomial<Rat> f = f0;
    if (is_zero(f.coeff(0))) {
        out.roots.push_back(Rat(0));
        std::vector<Rat> c(f.coeffs().begin(), f.coeffs().end());
        std::size_t k = 0;
        while (k < c.size() && is_zero(c[k])) ++k;
        f = Polynomial<Rat>(std::vector<Rat>(c.begin() + k, c.end()));
        if (f.degree() < 1) return out;
    }
    Int denate = 1;
    for (const auto& c : f.coeffs()) denate = denate / int_gcd(denate, c.get_den()) * c.get_den();
    std::vector<Int> ic;
    for (const auto& c : f.coeffs()) {
        Rat v = c * Rat(denate);
        ic.push_back(v.get_num());
    }
    Int content = 0;
    for (const auto& c : ic) content = int_gcd(content, c);
    for (auto& c : ic) c /= content;
    Int a0 = ic.front(), ad = ic.back();
    auto f0f = factor_trial(a0);
    auto fdf = factor_trial(ad);
    if (f0f.cofactor != 1 || fdf.cofactor != 1) out.complete = false;
    auto nums = divisors_from(f0f);
    auto dens = divisors_from(fdf);
    auto eval_is_zero = [&](const Rat& x) {
        Rat acc(ic.back());
        for (std::size_t i = ic.size() - 1; i-- > 0;) acc = acc * x + Rat(ic[i]);
        return sgn(acc) == 0;
    };
    for (const auto& n : nums)
        for (const auto& d : dens) {
            if (int_gcd(n, d) != 1) continue;
            Rat cand = make_rat(n, d);
            if (eval_is_zero(cand)) out.roots.push_back(cand);
            cand = -cand;
            if (eval_is_zero(cand)) out.roots.push_back(cand);
        }
    std::sort(out.roots.begin(), out.roots.end(), [](const Rat& a, const Rat& b) { return a < b; });
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
    return out;
}

using PolyQ = Polynomial<Rat>;

inline PolyQ polyq(const std::vector<long>& v) { return PolyQ::from_ints<Rat>(v); }

}  // namespace k3shim

#endif
