#pragma once

#include "mcx/hodge.hpp"

#include <functional>
#include <map>

namespace mcx {

namespace detail {

// ∂_r by the recursion ∂_1 = d_1, ∂_r = d_r - Σ_{j<r} d_{r-j} d_0^{-1} ∂_j,
// memoized on (r, bidegree).
class PartialTable {
  public:
    PartialTable(const MulticomplexData &mc, const HodgeKit &kit) : mc_(mc), kit_(kit) {}

    const Matrix &get(int r, Bidegree bd) {
        auto key = std::make_pair(r, bd);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        Bidegree target{bd.a + r, bd.b + 1 - r};
        Matrix m(mc_.dim(target), mc_.dim(bd));
        if (r <= mc_.Q && m.rows() > 0 && m.cols() > 0) {
            if (r < mc_.s)
                m += mc_.d(r, bd);
            for (int j = 1; j < r; ++j) {
                Bidegree mid{bd.a + j, bd.b + 1 - j};  // where ∂_j lands
                Bidegree back{mid.a, mid.b - 1};        // after d_0^{-1}
                if (r - j >= mc_.s || mc_.dim(mid) == 0 || mc_.dim(back) == 0)
                    continue;
                const Matrix &pj = get(j, bd);
                if (pj.is_zero())
                    continue;
                m -= mc_.d(r - j, back) * (kit_.at(mid).d0inv * pj);
            }
        }
        return memo_.emplace(key, std::move(m)).first->second;
    }

  private:
    const MulticomplexData &mc_;
    const HodgeKit &kit_;
    std::map<std::pair<int, Bidegree>, Matrix> memo_;
};

} // namespace detail

inline Matrix partial_r(const MulticomplexData &mc, const HodgeKit &kit, int r, int a, int b) {
    detail::PartialTable table(mc, kit);
    return table.get(r, {a, b});
}

// d_0 ∂_r ᾱ = -Σ_{i<r} d_i (∂_{r-i} - d_0 d_0^{-1} ∂_{r-i}) ᾱ on every
// harmonic basis vector ᾱ at (a, b).
inline bool check_d0_partial(const MulticomplexData &mc, const HodgeKit &kit, int r, int a, int b) {
    Bidegree bd{a, b};
    if (mc.dim(bd) == 0)
        return true;
    detail::PartialTable table(mc, kit);
    Bidegree land{a + r, b + 1 - r};
    Matrix lhs = mc.d(0, land) * table.get(r, bd);
    Bidegree top{a + r, b + 2 - r};
    Matrix rhs(mc.dim(top), mc.dim(bd));
    for (int i = 1; i < r && i < mc.s; ++i) {
        Bidegree mid{a + r - i, b + 1 - r + i};
        if (mc.dim(mid) == 0)
            continue;
        Matrix p = table.get(r - i, bd);
        Matrix corrected = p - mc.d(0, {mid.a, mid.b - 1}) * (kit.at(mid).d0inv * p);
        rhs -= mc.d(i, mid) * corrected;
    }
    const Subspace &e0 = kit.at(bd).e0;
    if (e0.dim() == 0)
        return true;
    Matrix cols = e0.columns();
    return lhs * cols == rhs * cols;
}

struct RuminOperators {
    int N = 1;
    TotalComplex tc;
    // per total degree, on Tot_h
    std::map<int, Matrix> b;
    std::map<int, Matrix> id_minus_b_inv;
    std::map<int, Matrix> pi_e;
    std::map<int, Matrix> pi_f;
    std::map<int, Matrix> pi0;
    // Π_0 d Π_E Π_0 : Tot_h -> Tot_{h+1}
    std::map<int, Matrix> dc_conjugated;
    // per (order, source bidegree), ambient coordinates
    std::map<std::pair<int, Bidegree>, Matrix> partial;
    std::map<std::pair<int, Bidegree>, Matrix> dc;
    // per (order, source bidegree), e0 coordinates
    std::map<std::pair<int, Bidegree>, Matrix> dc_e0;
    std::map<Bidegree, Subspace> e0;
    // per degree, d_c on E_0 coordinates (weights in increasing order)
    std::map<int, Matrix> dc_on_e0;
    bool routes_agree = false;

    Subspace harmonic(Bidegree bd) const {
        auto it = e0.find(bd);
        return it == e0.end() ? Subspace(0) : it->second;
    }

    std::size_t e0_dim(Bidegree bd) const { return harmonic(bd).dim(); }

    // d_c^r leaving bd in e0 coordinates, zero of the right shape when absent
    Matrix dc_restricted(int r, Bidegree bd) const {
        auto it = dc_e0.find({r, bd});
        if (it != dc_e0.end())
            return it->second;
        return Matrix(e0_dim({bd.a + r, bd.b + 1 - r}), e0_dim(bd));
    }

    Matrix dc_ambient(int r, Bidegree bd, std::size_t rows, std::size_t cols) const {
        auto it = dc.find({r, bd});
        return it == dc.end() ? Matrix(rows, cols) : it->second;
    }

    // E_0 in degree h: offsets of each weight's e0 block
    std::vector<std::pair<int, std::size_t>> e0_layout(int h) const {
        std::vector<std::pair<int, std::size_t>> out;
        std::size_t off = 0;
        for (int a : tc.layout(h).weights) {
            out.push_back({a, off});
            off += e0_dim(Bidegree::at(a, h));
        }
        return out;
    }

    std::size_t e0_total(int h) const {
        std::size_t n = 0;
        for (int a : tc.layout(h).weights)
            n += e0_dim(Bidegree::at(a, h));
        return n;
    }
};

inline RuminOperators build_rumin(const MulticomplexData &mc, const HodgeKit &kit) {
    RuminOperators rum;
    rum.N = mc.Q + 1;
    rum.tc = TotalComplex(mc);
    const TotalComplex &tc = rum.tc;
    for (const auto &[bd, blk] : kit.blocks)
        rum.e0[bd] = blk.e0;

    auto d0inv_total = [&](int h) {
        return tc.assemble(h, h - 1, [&](int a, int a2) -> std::optional<Matrix> {
            if (a != a2)
                return std::nullopt;
            return kit.at(Bidegree::at(a, h)).d0inv;
        });
    };
    for (int h : tc.degrees()) {
        rum.pi0[h] = tc.assemble(h, h, [&](int a, int a2) -> std::optional<Matrix> {
            if (a != a2)
                return std::nullopt;
            return kit.at(Bidegree::at(a, h)).pi0;
        });
    }
    auto pi0_of = [&](int h) {
        auto it = rum.pi0.find(h);
        return it == rum.pi0.end() ? Matrix(0, 0) : it->second;
    };

    // b = -d_0^{-1}(d - d_0) and the Neumann sum for (Id - b)^{-1}
    for (int h : tc.degrees()) {
        Matrix higher = tc.differential(h) - tc.piece(0, h);
        Matrix b = -(d0inv_total(h + 1) * higher);
        Matrix sum = Matrix::identity(tc.dim(h));
        Matrix power = Matrix::identity(tc.dim(h));
        for (int j = 1; j < rum.N; ++j) {
            power = power * b;
            if (power.is_zero())
                break;
            sum += power;
        }
        rum.b[h] = std::move(b);
        rum.id_minus_b_inv[h] = std::move(sum);
    }
    auto inv_of = [&](int h) {
        auto it = rum.id_minus_b_inv.find(h);
        return it == rum.id_minus_b_inv.end() ? Matrix(0, 0) : it->second;
    };
    for (int h : tc.degrees()) {
        Matrix first = inv_of(h) * (d0inv_total(h + 1) * tc.differential(h));
        Matrix second = tc.differential(h - 1) * (inv_of(h - 1) * d0inv_total(h));
        Matrix pf = first + second;
        rum.pi_e[h] = Matrix::identity(tc.dim(h)) - pf;
        rum.pi_f[h] = std::move(pf);
    }
    for (int h : tc.degrees())
        rum.dc_conjugated[h] = pi0_of(h + 1) * tc.differential(h) * rum.pi_e[h] * rum.pi0[h];

    // ∂_r and d_c^r = Π_0 ∂_r on e0
    detail::PartialTable table(mc, kit);
    for (const auto &bd : mc.bidegrees()) {
        for (int r = 1; r < rum.N; ++r) {
            Bidegree target{bd.a + r, bd.b + 1 - r};
            if (mc.dim(target) == 0)
                continue;
            const Matrix &p = table.get(r, bd);
            rum.partial[{r, bd}] = p;
            Matrix dcr = kit.at(target).pi0 * p * kit.at(bd).pi0;
            const Subspace &src = kit.at(bd).e0;
            const Subspace &dst = kit.at(target).e0;
            Matrix restricted(dst.dim(), src.dim());
            for (std::size_t c = 0; c < src.dim(); ++c)
                restricted.set_col(c, dst.coordinates(dcr * src.vector(c)));
            rum.dc[{r, bd}] = std::move(dcr);
            rum.dc_e0[{r, bd}] = std::move(restricted);
        }
    }

    // d_c on E_0 coordinates, and agreement with the conjugated form
    rum.routes_agree = true;
    for (int h : tc.degrees()) {
        auto src = rum.e0_layout(h);
        auto dst = rum.e0_layout(h + 1);
        Matrix m(rum.e0_total(h + 1), rum.e0_total(h));
        Matrix summed(tc.dim(h + 1), tc.dim(h));
        for (auto [a, off] : src)
            for (auto [a2, off2] : dst) {
                int r = a2 - a;
                if (r < 1)
                    continue;
                Bidegree bd = Bidegree::at(a, h);
                m.set_block(off2, off, rum.dc_restricted(r, bd));
                auto it = rum.dc.find({r, bd});
                if (it == rum.dc.end())
                    continue;
                const auto &ls = tc.layout(h);
                const auto &ld = tc.layout(h + 1);
                summed.set_block(ld.offsets[*ld.block(a2)], ls.offsets[*ls.block(a)], it->second);
            }
        rum.dc_on_e0[h] = std::move(m);
        if (!(summed == rum.dc_conjugated[h]))
            rum.routes_agree = false;
    }
    return rum;
}

struct RuminCohomology {
    std::size_t dim = 0;
    // representatives in Tot_h coordinates
    Subspace representatives;
};

inline RuminCohomology rumin_cohomology(const RuminOperators &rum, int h) {
    auto get = [&](int k) {
        auto it = rum.dc_on_e0.find(k);
        return it == rum.dc_on_e0.end() ? Matrix(rum.e0_total(k + 1), rum.e0_total(k)) : it->second;
    };
    Subspace cycles = kernel(get(h));
    Subspace boundaries = image(get(h - 1));
    Subspace reps = intersect(cycles, orthogonal_complement(boundaries));
    // embed E_0 coordinates into Tot_h
    const auto &lay = rum.tc.layout(h);
    std::vector<Vector> ambient;
    for (std::size_t i = 0; i < reps.dim(); ++i) {
        Vector coords = reps.vector(i);
        Vector x(lay.dim);
        for (auto [a, off] : rum.e0_layout(h)) {
            Subspace e0 = rum.harmonic(Bidegree::at(a, h));
            Vector part(coords.begin() + static_cast<std::ptrdiff_t>(off),
                        coords.begin() + static_cast<std::ptrdiff_t>(off + e0.dim()));
            x = x + lay.embed(a, e0.embed(part));
        }
        ambient.push_back(std::move(x));
    }
    return {cycles.dim() - boundaries.dim(), span(ambient, lay.dim)};
}

} // namespace mcx
