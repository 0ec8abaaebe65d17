// Scratch experiment: behaviour of the recognition lattice at the pinned
// precisions.  Not part of the build.
#include <cstdio>

#include "k3shim/modring.hpp"
#include "k3shim/polynomial.hpp"
#include "k3shim/lll.hpp"

using namespace k3shim;

static void probe(const Int& p, unsigned long k, const Int& x, unsigned d, const char* label) {
    Int M = int_pow(p, k);
    Int C = M;
    std::size_t cols = d + 2;
    IntMatrix rows;
    Int xi = 1;
    for (unsigned i = 0; i <= d; ++i) {
        std::vector<Int> row(cols, Int(0));
        row[0] = C * xi;
        row[i + 1] = 1;
        rows.push_back(row);
        xi = (xi * x) % M;
    }
    {
        std::vector<Int> row(cols, Int(0));
        row[0] = C * M;
        rows.push_back(row);
    }
    auto red = lll_reduce(rows);
    std::printf("== %s (p=%s k=%lu d=%u)\n", label, p.get_str().c_str(), k, d);
    int shown = 0;
    for (const auto& row : red) {
        if (row[0] != 0) continue;
        Int h = 0;
        for (unsigned i = 1; i < cols; ++i) {
            Int a = row[i] >= 0 ? row[i] : Int(-row[i]);
            if (a > h) h = a;
        }
        std::printf("  relation height %s coeffs:", h.get_str().c_str());
        for (unsigned i = 1; i < cols; ++i) std::printf(" %s", row[i].get_str().c_str());
        std::printf("\n");
        if (++shown > 3) break;
    }
}

int main() {
    {
        Int M = int_pow(Int(17), 10);
        Zmod enc = Zmod(81, M) / Zmod(64, M);
        probe(Int(17), 10, enc.value(), 1, "81/64 mod 17^10, d=1");
    }
    {
        probe(Int(11), 8, Int(5), 3, "5 mod 11^8, d=3");
    }
    {
        // 103-adic root of P10 via Hensel from a simple root mod 103.
        PolyQ P10 = polyq({4096, 18224, 28840, 19883, 6646, 733, -220, -331, -42, -13, 8});
        Int p(103);
        // find a simple root mod p
        Int root = -1;
        for (Int x = 0; x < p; ++x) {
            Int acc = 0;
            for (int i = P10.degree(); i >= 0; --i) acc = (acc * x + P10.coeff(i).get_num()) % p;
            if (acc % p == 0) {
                // derivative
                PolyQ d = P10.derivative();
                Int da = 0;
                for (int i = d.degree(); i >= 0; --i) da = (da * x + d.coeff(i).get_num()) % p;
                if (da % p != 0) {
                    root = x;
                    break;
                }
            }
        }
        if (root < 0) {
            std::printf("no simple root of P10 mod 103\n");
            return 0;
        }
        std::printf("simple root of P10 mod 103: %s\n", root.get_str().c_str());
        // Newton lift to 103^k
        for (unsigned long k : {20ul, 30ul, 40ul}) {
            Int M = int_pow(p, k);
            Int x = root;
            unsigned long prec = 1;
            while (prec < k) {
                prec = std::min(2 * prec, k);
                Int mod = int_pow(p, prec);
                Int fx = 0;
                for (int i = P10.degree(); i >= 0; --i)
                    fx = (fx * x + P10.coeff(i).get_num()) % mod;
                PolyQ dp = P10.derivative();
                Int dfx = 0;
                for (int i = dp.degree(); i >= 0; --i)
                    dfx = (dfx * x + dp.coeff(i).get_num()) % mod;
                Int g, s;
                mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, dfx.get_mpz_t(), mod.get_mpz_t());
                x = (x - fx * s) % mod;
                if (x < 0) x += mod;
            }
            probe(p, k, x, 10, "root of P10, d=10");
        }
    }
    return 0;
}
