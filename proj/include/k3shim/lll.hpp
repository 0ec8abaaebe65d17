// Copyright 2026 The k3shim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef K3SHIM_LLL_HPP
#define K3SHIM_LLL_HPP

#include <vector>

#include "k3shim/rational.hpp"

namespace k3shim {

using IntMatrix = std::vector<std::vector<Int>>;

// LLL reduction with delta = 3/4 and exact rational Gram-Schmidt.  The
// dimensions in this project never exceed sixteen, so the textbook algorithm
// is plenty.
inline IntMatrix lll_reduce(IntMatrix basis) {
    const std::size_t n = basis.size();
    if (n == 0) return basis;
    const std::size_t m = basis[0].size();
    for (const auto& row : basis)
        if (row.size() != m) raise(errc::invalid_argument, "ragged basis matrix");

    auto dot = [&](const std::vector<Int>& a, const std::vector<Int>& b) {
        Int s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n, Rat(0));  // squared GS lengths

    auto gram_schmidt = [&]() {
        std::vector<std::vector<Rat>> gs(n, std::vector<Rat>(m, Rat(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < m; ++k) gs[i][k] = Rat(basis[i][k]);
            for (std::size_t j = 0; j < i; ++j) {
                Rat num(0);
                for (std::size_t k = 0; k < m; ++k) num += Rat(basis[i][k]) * gs[j][k];
                if (sgn(B[j]) == 0) raise(errc::degenerate_basis, "dependent rows");
                mu[i][j] = num / B[j];
                for (std::size_t k = 0; k < m; ++k) gs[i][k] -= mu[i][j] * gs[j][k];
            }
            Rat b(0);
            for (std::size_t k = 0; k < m; ++k) b += gs[i][k] * gs[i][k];
            B[i] = b;
            if (sgn(B[i]) == 0) raise(errc::degenerate_basis, "dependent rows");
        }
    };

    gram_schmidt();
    const Rat delta = make_rat(3, 4);
    std::size_t k = 1;
    while (k < n) {
        // Size reduction.
        for (std::size_t j = k; j-- > 0;) {
            Rat q = mu[k][j];
            Int r;
            // nearest integer
            Rat half = make_rat(1, 2);
            Rat shifted = q + half;
            mpz_fdiv_q(r.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
            if (r != 0) {
                for (std::size_t t = 0; t < m; ++t) basis[k][t] -= r * basis[j][t];
                gram_schmidt();
            }
        }
        // Lovász condition.
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gram_schmidt();
            if (k > 1) --k;
        }
        (void)dot;
    }
    return basis;
}

// |det| of the Gram matrix of the rows — preserved by lll_reduce; used by the
// property tests.
inline Rat gram_determinant(const IntMatrix& basis) {
    const std::size_t n = basis.size();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Int s = 0;
            for (std::size_t k = 0; k < basis[i].size(); ++k) s += basis[i][k] * basis[j][k];
            g[i][j] = Rat(s);
        }
    // Gaussian elimination.
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && sgn(g[piv][col]) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(g[piv], g[col]);
            det = -det;
        }
        det *= g[col][col];
        Rat d = g[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            Rat f = g[r][col] / d;
            for (std::size_t c = col; c < n; ++c) g[r][c] -= f * g[col][c];
        }
    }
    return det;
}

}  // namespace k3shim

#endif
