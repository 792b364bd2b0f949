#pragma once

// Shared fixtures and independent oracles for the test suites.

#include "mcx/mcx.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>

namespace mcx::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<Vector> rs;
    for (const auto &r : rows) {
        Vector v;
        for (int x : r)
            v.push_back(x);
        rs.push_back(std::move(v));
    }
    return Matrix::from_rows(rs);
}

inline Vector vec(std::initializer_list<int> xs) {
    Vector v;
    for (int x : xs)
        v.push_back(x);
    return v;
}

inline Space space(std::size_t dim) { return Space{dim, {}}; }

// C_{0,0} -> C_{1,0} joined by d_1 = (1)
inline MulticomplexData single_d1() {
    MulticomplexData mc;
    mc.Q = 1;
    mc.s = 2;
    mc.spaces[{0, 0}] = space(1);
    mc.spaces[{1, 0}] = space(1);
    mc.set_map(1, {0, 0}, mat({{1}}));
    return mc;
}

// d_0-only instance: C_{0,0} -> C_{0,1} by identity plus an idle C_{1,0}
inline MulticomplexData pure_d0() {
    MulticomplexData mc;
    mc.Q = 1;
    mc.s = 1;
    mc.spaces[{0, 0}] = space(2);
    mc.spaces[{0, 1}] = space(2);
    mc.spaces[{1, 0}] = space(1);
    mc.set_map(0, {0, 0}, mat({{1, 0}, {0, 0}}));
    return mc;
}

inline RandomParams small_params(std::uint64_t seed, std::size_t max_dim = 14) {
    RandomParams p;
    p.Q = 1 + static_cast<int>(seed % 5);
    p.max_total_dim = max_dim;
    p.max_gap = std::min(p.Q, 3);
    return p;
}

// Brute-force Chevalley–Eilenberg cohomology from structure constants:
// exterior algebra on bitmasks, dθ_k = -Σ_{i<j} c_ij^k θ_i∧θ_j extended
// as a graded derivation.
inline std::vector<std::size_t> ce_betti(const CarnotAlgebraSpec &spec) {
    int n = spec.dim;
    auto c = spec.structure_constants();
    std::vector<std::vector<unsigned>> basis(n + 1);
    for (unsigned m = 0; m < (1u << n); ++m)
        basis[std::popcount(m)].push_back(m);
    auto index_of = [&](int k, unsigned m) {
        const auto &b = basis[k];
        return static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), m) - b.begin());
    };
    // sign of inserting generator g at the front of mask m
    auto insert_sign = [](unsigned m, int g) { return std::popcount(m & ((1u << g) - 1)) % 2 ? -1 : 1; };
    std::vector<Matrix> d(n + 1);
    for (int k = 0; k < n; ++k) {
        Matrix m(basis[k + 1].size(), basis[k].size());
        for (std::size_t col = 0; col < basis[k].size(); ++col) {
            unsigned mask = basis[k][col];
            int pos = 0; // number of generators already passed
            for (int g = 0; g < n; ++g) {
                if (!(mask & (1u << g)))
                    continue;
                // d(θ_g) placed at position pos, rest unchanged; sign (-1)^pos
                unsigned rest = mask & ~(1u << g);
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        if (is_zero(c[i][j][g]) || (rest & (1u << i)) || (rest & (1u << j)) || i == j)
                            continue;
                        // θ_i∧θ_j∧(rest), then sort
                        int sgn = insert_sign(rest, j);
                        unsigned r2 = rest | (1u << j);
                        sgn *= insert_sign(r2, i);
                        unsigned out = r2 | (1u << i);
                        Scalar v = -c[i][j][g] * sgn * (pos % 2 ? -1 : 1);
                        m(index_of(k + 1, out), col) += v;
                    }
                ++pos;
            }
        }
        d[k] = std::move(m);
    }
    std::vector<std::size_t> betti(n + 1);
    for (int k = 0; k <= n; ++k) {
        std::size_t dim = basis[k].size();
        std::size_t rk_out = k < n ? rank(d[k]) : 0;
        std::size_t rk_in = k > 0 ? rank(d[k - 1]) : 0;
        betti[k] = dim - rk_out - rk_in;
    }
    return betti;
}

struct Pipeline {
    MulticomplexData mc;
    HodgeKit kit;
    RuminOperators rum;
    SpectralEngine eng;

    explicit Pipeline(MulticomplexData data)
        : mc(std::move(data)), kit(build_hodge_kit(mc)), rum(build_rumin(mc, kit)), eng(mc, kit, rum) {}
    Pipeline(const Pipeline &) = delete;
    Pipeline &operator=(const Pipeline &) = delete;
};

inline MulticomplexData engel(int D, bool self_dual = false) {
    DerhamOptions opt;
    opt.self_dual = self_dual;
    return polynomial_derham(catalog("engel", D), opt);
}

} // namespace mcx::testing
