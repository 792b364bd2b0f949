#pragma once

#include "mcx/carnot.hpp"
#include "mcx/spectral.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcx {

struct StarKit {
    int n = 0; // top degree
    int Q = 0; // weight of the volume form
    // ⋆ : C_{p,k-p} -> C_{Q-p, n-k-Q+p}
    std::map<Bidegree, Matrix> star;
    Bidegree top;

    Bidegree dual(Bidegree bd) const { return Bidegree::at(Q - bd.a, n - bd.degree()); }

    Matrix at(Bidegree bd, std::size_t rows) const {
        auto it = star.find(bd);
        return it == star.end() ? Matrix(rows, 0) : it->second;
    }
};

// ⋆(c ⊗ θ_I) = σ(c) ⊗ ε(I, I^c) θ_{I^c}, so that θ_I ∧ ⋆θ_I = vol.
inline StarKit build_star(const MulticomplexData &mc) {
    if (!mc.exterior)
        throw std::invalid_argument("multicomplex carries no wedge structure");
    const ExteriorData &ext = *mc.exterior;
    StarKit kit;
    kit.n = ext.generators();
    kit.Q = mc.Q;
    int q = 0;
    for (int w : ext.weights)
        q += w;
    if (q != mc.Q)
        throw std::invalid_argument("volume weight differs from Q");
    kit.top = Bidegree::at(kit.Q, kit.n);
    std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> index;
    for (const auto &[bd, forms] : ext.forms)
        for (std::size_t r = 0; r < forms.size(); ++r)
            index[{forms[r].coef, forms[r].covectors}] = r;
    for (const auto &[bd, forms] : ext.forms) {
        Bidegree tgt = kit.dual(bd);
        Matrix m(mc.dim(tgt), forms.size());
        for (std::size_t col = 0; col < forms.size(); ++col) {
            const auto &f = forms[col];
            std::vector<int> rest;
            for (int i = 0; i < kit.n; ++i)
                if (!std::binary_search(f.covectors.begin(), f.covectors.end(), i))
                    rest.push_back(i);
            std::vector<int> all = f.covectors;
            all.insert(all.end(), rest.begin(), rest.end());
            int sign = sort_wedge(all);
            for (std::size_t c = 0; c < ext.coefficient_dim; ++c) {
                const Scalar &s = ext.coefficient_star(c, f.coef);
                if (is_zero(s))
                    continue;
                m(index.at({c, rest}), col) = sign * s;
            }
        }
        kit.star[bd] = std::move(m);
    }
    return kit;
}

struct StarReport {
    bool star_square = true;
    bool isometry = true;
    // one flag per order i of δ_i and δ_c^i
    std::map<int, bool> delta_matches;
    std::map<int, bool> delta_c_matches;
    bool delta0_consistent = true;
    bool e0_closed = true;
    std::size_t stations_checked = 0;
    std::vector<std::string> mismatches;

    bool ok() const {
        bool all = star_square && isometry && delta0_consistent && e0_closed && mismatches.empty();
        for (const auto &[i, okay] : delta_matches)
            all = all && okay;
        for (const auto &[i, okay] : delta_c_matches)
            all = all && okay;
        return all;
    }
};

inline int adjoint_sign(int n, int k) { return ((n * (k + 1) + 1) % 2 == 0) ? 1 : -1; }

// Checks ⋆⋆ = (-1)^{k(n-k)}, isometry, δ_i = ±⋆d_i⋆ and δ_c^i = ±⋆d_c^i⋆
// against transposes, ⋆e0 = e0, and ⋆E_{r1,r2} = E_{r2,r1} for every
// r1, r2 <= max_order at every node with e0 != 0.
inline StarReport check_star_duality(const StarKit &star, const MulticomplexData &mc,
                                     const HodgeKit &kit, const RuminOperators &rum,
                                     SpectralEngine &eng, int max_order) {
    StarReport rep;
    auto star_at = [&](Bidegree bd) { return star.at(bd, mc.dim(star.dual(bd))); };
    for (const auto &bd : mc.bidegrees()) {
        int k = bd.degree();
        Matrix s = star_at(bd);
        Matrix ss = star_at(star.dual(bd)) * s;
        Scalar sign = (k * (star.n - k)) % 2 == 0 ? 1 : -1;
        if (!(ss == sign * Matrix::identity(mc.dim(bd))))
            rep.star_square = false;
        if (!(s.transpose() * s == Matrix::identity(mc.dim(bd))))
            rep.isometry = false;
    }
    // δ_i at (p, k-p) is the transpose of d_i arriving there
    for (int i = 0; i < mc.s; ++i) {
        bool okay = true, okay_c = true;
        for (const auto &bd : mc.bidegrees()) {
            int k = bd.degree();
            Bidegree from{bd.a - i, bd.b + i - 1};
            if (mc.dim(from) == 0)
                continue;
            Bidegree d1 = star.dual(bd);
            Matrix via = Scalar(adjoint_sign(star.n, k)) *
                         (star_at({d1.a + i, d1.b + 1 - i}) * mc.d(i, d1) * star_at(bd));
            if (!(via == mc.d(i, from).transpose()))
                okay = false;
            if (i == 0) {
                if (!(kit.at(bd).delta0 == mc.d(0, from).transpose()))
                    rep.delta0_consistent = false;
                continue;
            }
            auto dc_of = [&](Bidegree src) {
                Bidegree dst{src.a + i, src.b + 1 - i};
                return rum.dc_ambient(i, src, mc.dim(dst), mc.dim(src));
            };
            Matrix via_c = Scalar(adjoint_sign(star.n, k)) *
                           (star_at({d1.a + i, d1.b + 1 - i}) * dc_of(d1) * star_at(bd));
            if (!(via_c == dc_of(from).transpose()))
                okay_c = false;
        }
        rep.delta_matches[i] = okay;
        if (i > 0)
            rep.delta_c_matches[i] = okay_c;
    }
    for (const auto &bd : mc.bidegrees()) {
        if (!(map_subspace(star_at(bd), kit.e0(bd)) == kit.e0(star.dual(bd))))
            rep.e0_closed = false;
    }
    for (const auto &bd : mc.bidegrees()) {
        if (kit.e0_dim(bd) == 0)
            continue;
        Bidegree du = star.dual(bd);
        for (int r1 = 1; r1 <= max_order; ++r1)
            for (int r2 = 1; r2 <= max_order; ++r2) {
                ++rep.stations_checked;
                Subspace lhs = map_subspace(star_at(bd), eng.e(r1, r2, bd.a, bd.degree()));
                const Subspace &rhs = eng.e(r2, r1, du.a, du.degree());
                if (!(lhs == rhs))
                    rep.mismatches.push_back("E_{" + std::to_string(r1) + "," + std::to_string(r2) +
                                             "} at (p,k)=(" + std::to_string(bd.a) + "," +
                                             std::to_string(bd.degree()) + "): star image has dim " +
                                             std::to_string(lhs.dim()) + ", dual station has dim " +
                                             std::to_string(rhs.dim()));
            }
    }
    return rep;
}

} // namespace mcx
