#pragma once

#include "mcx/rumin.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>

namespace mcx {

namespace detail {

// Linear system over a tuple of unknown blocks with equations in row blocks.
class BlockSystem {
  public:
    std::size_t add_unknown(std::size_t dim) {
        cols_.push_back(dim);
        return cols_.size() - 1;
    }
    std::size_t add_equation(std::size_t dim) {
        rows_.push_back(dim);
        return rows_.size() - 1;
    }
    void add(std::size_t row, std::size_t col, const Matrix &m) {
        auto [it, fresh] = blocks_.try_emplace({row, col}, m);
        if (!fresh)
            it->second += m;
    }
    std::size_t cols() const { return offset(cols_, cols_.size()); }
    std::size_t rows() const { return offset(rows_, rows_.size()); }
    std::size_t col_offset(std::size_t c) const { return offset(cols_, c); }
    std::size_t row_offset(std::size_t r) const { return offset(rows_, r); }
    std::size_t col_dim(std::size_t c) const { return cols_[c]; }

    Matrix matrix() const {
        Matrix m(rows(), cols());
        for (const auto &[rc, blk] : blocks_)
            m.set_block(row_offset(rc.first), col_offset(rc.second), blk);
        return m;
    }

    // rows selecting one unknown block out of the whole tuple
    Matrix selector(std::size_t c) const {
        Matrix s(cols_[c], cols());
        for (std::size_t i = 0; i < cols_[c]; ++i)
            s(i, col_offset(c) + i) = 1;
        return s;
    }

    Vector slice(const Vector &x, std::size_t c) const {
        auto off = static_cast<std::ptrdiff_t>(col_offset(c));
        return Vector(x.begin() + off, x.begin() + off + static_cast<std::ptrdiff_t>(cols_[c]));
    }

  private:
    static std::size_t offset(const std::vector<std::size_t> &dims, std::size_t upto) {
        std::size_t o = 0;
        for (std::size_t k = 0; k < upto; ++k)
            o += dims[k];
        return o;
    }
    std::vector<std::size_t> cols_;
    std::vector<std::size_t> rows_;
    std::map<std::pair<std::size_t, std::size_t>, Matrix> blocks_;
};

inline Subspace from_e0_coords(const Subspace &e0, const Subspace &coords) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < coords.dim(); ++i)
        vs.push_back(e0.embed(coords.vector(i)));
    return span(vs, e0.ambient_dim());
}

} // namespace detail

// Z_r^{p,k-p}: α with d_0 α = 0 and witnesses z_{p+1..p+r-1} such that
// d_n α = Σ_{i<n} d_i z_{p+n-i} for 1 <= n <= r-1.
inline Subspace z_direct(const MulticomplexData &mc, int r, int p, int k) {
    Bidegree src = Bidegree::at(p, k);
    detail::BlockSystem sys;
    std::size_t alpha = sys.add_unknown(mc.dim(src));
    std::vector<std::size_t> z(r, 0); // z[j] holds z_{p+j}
    for (int j = 1; j < r; ++j)
        z[j] = sys.add_unknown(mc.dim(Bidegree::at(p + j, k)));
    for (int n = 0; n < r; ++n) {
        Bidegree tgt = Bidegree::at(p + n, k + 1);
        std::size_t row = sys.add_equation(mc.dim(tgt));
        if (n < mc.s)
            sys.add(row, alpha, mc.d(n, src));
        for (int i = 0; i < n && i < mc.s; ++i)
            sys.add(row, z[n - i], -mc.d(i, Bidegree::at(p + n - i, k)));
    }
    if (sys.col_dim(alpha) == 0)
        return Subspace(0);
    return map_subspace(sys.selector(alpha), kernel(sys.matrix()));
}

// B_r^{p,k-p}: α = Σ_{m<r} d_m c_{p-m} over tuples with
// Σ_{m>=l} d_{m-l} c_{p-m} = 0 for 1 <= l <= r-1.
inline Subspace b_direct(const MulticomplexData &mc, int r, int p, int k) {
    Bidegree tgt = Bidegree::at(p, k);
    detail::BlockSystem sys;
    std::vector<std::size_t> c(r);
    for (int m = 0; m < r; ++m)
        c[m] = sys.add_unknown(p - m >= 0 ? mc.dim(Bidegree::at(p - m, k - 1)) : 0);
    for (int l = 1; l < r; ++l) {
        std::size_t row = sys.add_equation(p - l >= 0 ? mc.dim(Bidegree::at(p - l, k)) : 0);
        for (int m = l; m < r; ++m)
            if (m - l < mc.s && p - m >= 0)
                sys.add(row, c[m], mc.d(m - l, Bidegree::at(p - m, k - 1)));
    }
    Matrix top(mc.dim(tgt), sys.cols());
    for (int m = 0; m < r && m < mc.s; ++m)
        if (p - m >= 0)
            top.set_block(0, sys.col_offset(c[m]), mc.d(m, Bidegree::at(p - m, k - 1)));
    if (top.rows() == 0)
        return Subspace(0);
    return map_subspace(top, kernel(sys.matrix()));
}

// Harmonic form of Z_r: ᾱ in e0 with harmonic ω̄_{p+1..p+r-2} such that
// d_c^i ᾱ = Σ_{j<i} d_c^{i-j} ω̄_{p+j} for 1 <= i <= r-1.
inline Subspace z_harmonic(const RuminOperators &rum, int r, int p, int k) {
    Bidegree src = Bidegree::at(p, k);
    Subspace e0 = rum.harmonic(src);
    detail::BlockSystem sys;
    std::size_t alpha = sys.add_unknown(e0.dim());
    std::vector<std::size_t> w(r, 0);
    for (int j = 1; j <= r - 2; ++j)
        w[j] = sys.add_unknown(rum.e0_dim(Bidegree::at(p + j, k)));
    for (int i = 1; i < r; ++i) {
        std::size_t row = sys.add_equation(rum.e0_dim(Bidegree::at(p + i, k + 1)));
        sys.add(row, alpha, rum.dc_restricted(i, src));
        for (int j = 1; j < i; ++j)
            sys.add(row, w[j], -rum.dc_restricted(i - j, Bidegree::at(p + j, k)));
    }
    if (e0.dim() == 0)
        return Subspace(e0.ambient_dim());
    Subspace coords = map_subspace(sys.selector(alpha), kernel(sys.matrix()));
    return detail::from_e0_coords(e0, coords);
}

// Harmonic part of B_r: d_c^{r-1} c̄ - Σ_{i=1}^{r-2} d_c^{r-1-i} ω̄_{p-r+1+i}
// over c̄, ω̄ with d_c^i c̄ = Σ_{j<i} d_c^{i-j} ω̄_{p-r+1+j} for i <= r-2.
inline Subspace b_harmonic(const RuminOperators &rum, int r, int p, int k) {
    Bidegree tgt = Bidegree::at(p, k);
    Subspace e0 = rum.harmonic(tgt);
    if (r <= 1 || e0.dim() == 0)
        return Subspace(e0.ambient_dim());
    int base = p - r + 1;
    auto at = [&](int weight, int degree) { return Bidegree::at(weight, degree); };
    auto e0dim = [&](int weight, int degree) {
        return weight >= 0 ? rum.e0_dim(at(weight, degree)) : std::size_t{0};
    };
    auto dcr = [&](int order, int weight, int degree) {
        if (weight < 0)
            return Matrix(e0dim(weight + order, degree + 1), 0);
        return rum.dc_restricted(order, at(weight, degree));
    };
    detail::BlockSystem sys;
    std::size_t cbar = sys.add_unknown(e0dim(base, k - 1));
    std::vector<std::size_t> w(r, 0);
    for (int j = 1; j <= r - 2; ++j)
        w[j] = sys.add_unknown(e0dim(base + j, k - 1));
    for (int i = 1; i <= r - 2; ++i) {
        std::size_t row = sys.add_equation(e0dim(base + i, k));
        sys.add(row, cbar, dcr(i, base, k - 1));
        for (int j = 1; j < i; ++j)
            sys.add(row, w[j], -dcr(i - j, base + j, k - 1));
    }
    Matrix top(e0.dim(), sys.cols());
    top.set_block(0, sys.col_offset(cbar), dcr(r - 1, base, k - 1));
    for (int i = 1; i <= r - 2; ++i)
        top.set_block(0, sys.col_offset(w[i]), -dcr(r - 1 - i, base + i, k - 1));
    Subspace coords = sys.cols() == 0 ? Subspace(e0.dim()) : map_subspace(top, kernel(sys.matrix()));
    return detail::from_e0_coords(e0, coords);
}

// ω̄ witnesses and the unreduced representative of Δ_r[α].
struct WitnessChain {
    int r = 0;
    Bidegree source;
    Vector alpha_bar;
    // omegas[j-1] is ω̄_{p+j} in ambient coordinates, j = 1..r-2
    std::vector<Vector> omegas;
    // d_c^r ᾱ - Σ_{i=2}^{r-1} d_c^i ω̄_{p+r-i}, ambient coordinates at the target
    Vector output;
    // orders i whose summand is nonzero
    std::set<int> summand_orders;
};

struct DirectWitnesses {
    std::vector<Vector> z; // z[j-1] is z_{p+j}
    // d_r α - Σ_{i=1}^{r-1} d_i z_{p+r-i}
    Vector output;
};

class SpectralEngine {
  public:
    SpectralEngine(const MulticomplexData &mc, const HodgeKit &kit, const RuminOperators &rum)
        : mc_(mc), kit_(kit), rum_(rum) {}

    const MulticomplexData &data() const { return mc_; }
    const RuminOperators &rumin() const { return rum_; }
    int infinity() const { return mc_.Q + 2; }

    const Subspace &z(int r, int p, int k) {
        return cached(z_, {r, p, k}, [&] { return z_direct(mc_, r, p, k); });
    }
    const Subspace &b(int r, int p, int k) {
        return cached(b_, {r, p, k}, [&] { return b_direct(mc_, r, p, k); });
    }
    const Subspace &zh(int r, int p, int k) {
        return cached(zh_, {r, p, k}, [&] { return z_harmonic(rum_, r, p, k); });
    }
    const Subspace &bh(int r, int p, int k) {
        return cached(bh_, {r, p, k}, [&] { return b_harmonic(rum_, r, p, k); });
    }

    // E_{j,l}^{p,k-p} = Z_j ∩ (B_l)^⊥
    const Subspace &e(int j, int l, int p, int k) {
        return cached(e_, {j, l, p, k}, [&] {
            return intersect(zh(j, p, k), orthogonal_complement(bh(l, p, k)));
        });
    }

    // same space from the direct definitions
    Subspace e_direct(int j, int l, int p, int k) {
        return intersect(z(j, p, k), orthogonal_complement(b(l, p, k)));
    }

    // projection killing B_r at (p, k)
    const Matrix &reducer(int r, int p, int k) {
        return cached(red_, {r, p, k}, [&] {
            std::size_t n = mc_.dim(Bidegree::at(p, k));
            return Matrix::identity(n) - projector(b(r, p, k));
        });
    }

    // Witnesses for α ∈ Z_r at (p, k). `perturb` adds a random element of
    // the homogeneous solution space, for checking independence of choice.
    std::optional<WitnessChain> witnesses(int r, int p, int k, const Vector &alpha,
                                          std::optional<std::uint64_t> perturb = {}) {
        Bidegree src = Bidegree::at(p, k);
        Subspace e0 = rum_.harmonic(src);
        WitnessChain wc;
        wc.r = r;
        wc.source = src;
        wc.alpha_bar = kit_.at(src).pi0 * alpha;
        Vector abar = e0.coordinates(wc.alpha_bar);

        detail::BlockSystem sys;
        std::vector<std::size_t> w(r, 0);
        for (int j = 1; j <= r - 2; ++j)
            w[j] = sys.add_unknown(rum_.e0_dim(Bidegree::at(p + j, k)));
        Vector rhs;
        for (int i = 1; i < r; ++i) {
            std::size_t row = sys.add_equation(rum_.e0_dim(Bidegree::at(p + i, k + 1)));
            for (int j = 1; j < i; ++j)
                sys.add(row, w[j], rum_.dc_restricted(i - j, Bidegree::at(p + j, k)));
            Vector part = rum_.dc_restricted(i, src) * abar;
            rhs.insert(rhs.end(), part.begin(), part.end());
        }
        Matrix m = sys.matrix();
        auto sol = solve_particular(m, rhs);
        if (!sol)
            return std::nullopt;
        Vector x = *sol;
        if (perturb)
            x = x + random_member(kernel(m), *perturb);

        Bidegree tgt = Bidegree::at(p + r, k + 1);
        std::size_t tdim = rum_.e0_dim(tgt);
        Subspace te0 = rum_.harmonic(tgt);
        Vector out(tdim);
        Vector lead = rum_.dc_restricted(r, src) * abar;
        if (!is_zero(lead))
            wc.summand_orders.insert(r);
        out = out + lead;
        for (int j = 1; j <= r - 2; ++j) {
            Bidegree wb = Bidegree::at(p + j, k);
            Vector coords = sys.slice(x, w[j]);
            wc.omegas.push_back(rum_.harmonic(wb).embed(coords));
            int i = r - j;
            if (i < 2)
                continue;
            Vector term = rum_.dc_restricted(i, wb) * coords;
            if (!is_zero(term))
                wc.summand_orders.insert(i);
            out = out - term;
        }
        wc.output = tdim ? te0.embed(out) : Vector(mc_.dim(tgt));
        return wc;
    }

    // Δ_r[α], reduced to the canonical representative in (B_r)^⊥ at the target
    Vector delta(int r, int p, int k, const Vector &alpha) {
        auto wc = witnesses(r, p, k, alpha);
        if (!wc)
            throw std::invalid_argument("no witnesses: input is not in Z_r");
        return reducer(r, p + r, k + 1) * wc->output;
    }

    // Δ_r from the defining formula d_r α - Σ d_i z_{p+r-i}
    std::optional<DirectWitnesses> direct_witnesses(int r, int p, int k, const Vector &alpha,
                                                    std::optional<std::uint64_t> perturb = {}) {
        Bidegree src = Bidegree::at(p, k);
        detail::BlockSystem sys;
        std::vector<std::size_t> z(r, 0);
        for (int j = 1; j < r; ++j)
            z[j] = sys.add_unknown(mc_.dim(Bidegree::at(p + j, k)));
        Vector rhs;
        for (int n = 0; n < r; ++n) {
            std::size_t row = sys.add_equation(mc_.dim(Bidegree::at(p + n, k + 1)));
            for (int i = 0; i < n && i < mc_.s; ++i)
                sys.add(row, z[n - i], mc_.d(i, Bidegree::at(p + n - i, k)));
            Vector part = n < mc_.s ? mc_.d(n, src) * alpha
                                    : Vector(mc_.dim(Bidegree::at(p + n, k + 1)));
            rhs.insert(rhs.end(), part.begin(), part.end());
        }
        Matrix m = sys.matrix();
        auto sol = solve_particular(m, rhs);
        if (!sol)
            return std::nullopt;
        Vector x = *sol;
        if (perturb)
            x = x + random_member(kernel(m), *perturb);
        DirectWitnesses dw;
        Bidegree tgt = Bidegree::at(p + r, k + 1);
        Vector out = r < mc_.s ? mc_.d(r, src) * alpha : Vector(mc_.dim(tgt));
        for (int j = 1; j < r; ++j) {
            Vector zj = sys.slice(x, z[j]);
            dw.z.push_back(zj);
            int i = r - j;
            if (i < mc_.s)
                out = out - mc_.d(i, Bidegree::at(p + j, k)) * zj;
        }
        dw.output = std::move(out);
        return dw;
    }

    Vector delta_direct(int r, int p, int k, const Vector &alpha) {
        auto dw = direct_witnesses(r, p, k, alpha);
        if (!dw)
            throw std::invalid_argument("no witnesses: input is not in Z_r");
        return reducer(r, p + r, k + 1) * dw->output;
    }

    // rank of Δ_r: E_r^{p,k-p} -> E_r^{p+r,k+1-p-r} on quotients
    std::size_t delta_rank(int r, int p, int k, bool direct = false) {
        const Subspace &zs = z(r, p, k);
        std::size_t tdim = mc_.dim(Bidegree::at(p + r, k + 1));
        if (zs.dim() == 0 || tdim == 0)
            return 0;
        std::vector<Vector> images;
        for (std::size_t i = 0; i < zs.dim(); ++i)
            images.push_back(direct ? delta_direct(r, p, k, zs.vector(i))
                                    : delta(r, p, k, zs.vector(i)));
        return span(images, tdim).dim();
    }

    std::size_t page_dim(int r, int p, int k) { return z(r, p, k).dim() - b(r, p, k).dim(); }

  private:
    using Key3 = std::tuple<int, int, int>;
    using Key4 = std::tuple<int, int, int, int>;

    template <class Map, class Fn> const typename Map::mapped_type &cached(Map &memo, const typename Map::key_type &key, Fn &&fn) {
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
        return memo.emplace(key, fn()).first->second;
    }

    static Vector random_member(const Subspace &s, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> coef(-3, 3);
        Vector c(s.dim());
        for (auto &x : c)
            x = coef(rng);
        return s.embed(c);
    }

    const MulticomplexData &mc_;
    const HodgeKit &kit_;
    const RuminOperators &rum_;
    std::map<Key3, Subspace> z_, b_, zh_, bh_;
    std::map<Key4, Subspace> e_;
    std::map<Key3, Matrix> red_;
};

// I_{p,k} for every node (p, k) with e0 != 0
inline std::map<std::pair<int, int>, std::set<int>> index_sets(const RuminOperators &rum) {
    std::map<std::pair<int, int>, std::set<int>> out;
    for (const auto &[bd, e0] : rum.e0) {
        if (e0.dim() == 0)
            continue;
        auto &orders = out[{bd.a, bd.degree()}];
        for (int j = 1; j < rum.N; ++j) {
            auto it = rum.dc_e0.find({j, bd});
            if (it != rum.dc_e0.end() && !it->second.is_zero())
                orders.insert(j);
        }
    }
    return out;
}

inline Subspace e_jl(SpectralEngine &eng, int j, int l, int p, int k) { return eng.e(j, l, p, k); }

struct Station {
    int degree = 0;
    int weight = 0;
    int in_order = 1;  // l in E_{j,l}
    int out_order = 1; // j in E_{j,l}; the order of the outgoing Δ
    Subspace space;
    // Δ_{out_order} in station coordinates (next station × this station);
    // empty for the last station
    Matrix delta;
    std::set<int> summand_orders;
};

struct SpectralChain {
    std::vector<Station> stations;
    bool composition_zero = true;
};

struct ChainEnumeration {
    std::vector<SpectralChain> chains;
    bool truncated = false;
};

// maximal paths in the arrow graph; each path is a list of (p, k) and orders
struct ArrowPath {
    std::vector<std::pair<int, int>> nodes;
    std::vector<int> orders;
};

inline std::vector<ArrowPath> maximal_paths(const std::map<std::pair<int, int>, std::set<int>> &sets,
                                            std::size_t cap, bool &truncated) {
    std::set<std::pair<int, int>> has_incoming;
    for (const auto &[node, orders] : sets)
        for (int j : orders)
            if (sets.count({node.first + j, node.second + 1}))
                has_incoming.insert({node.first + j, node.second + 1});
    auto successors = [&](std::pair<int, int> node) {
        std::vector<std::pair<int, int>> out;
        auto it = sets.find(node);
        if (it == sets.end())
            return out;
        for (int j : it->second)
            if (sets.count({node.first + j, node.second + 1}))
                out.push_back({node.first + j, node.second + 1});
        return out;
    };
    std::vector<ArrowPath> paths;
    truncated = false;
    std::vector<std::pair<int, int>> starts;
    for (const auto &[node, orders] : sets)
        if (!has_incoming.count(node) && !successors(node).empty())
            starts.push_back(node);
    // sort by degree, then weight
    std::sort(starts.begin(), starts.end(), [](auto x, auto y) {
        return std::make_pair(x.second, x.first) < std::make_pair(y.second, y.first);
    });
    std::function<void(ArrowPath &)> walk = [&](ArrowPath &path) {
        if (paths.size() >= cap) {
            truncated = true;
            return;
        }
        auto next = successors(path.nodes.back());
        if (next.empty()) {
            paths.push_back(path);
            return;
        }
        for (auto n : next) {
            path.orders.push_back(n.first - path.nodes.back().first);
            path.nodes.push_back(n);
            walk(path);
            path.nodes.pop_back();
            path.orders.pop_back();
        }
    };
    for (auto s : starts) {
        ArrowPath path;
        path.nodes.push_back(s);
        walk(path);
    }
    return paths;
}

inline ChainEnumeration enumerate_spectral_complexes(SpectralEngine &eng, std::size_t cap) {
    if (cap < 1)
        throw std::invalid_argument("chain cap must be at least 1");
    ChainEnumeration result;
    auto paths = maximal_paths(index_sets(eng.rumin()), cap, result.truncated);
    for (const auto &path : paths) {
        SpectralChain chain;
        for (std::size_t t = 0; t < path.nodes.size(); ++t) {
            Station st;
            st.weight = path.nodes[t].first;
            st.degree = path.nodes[t].second;
            st.in_order = t == 0 ? 1 : path.orders[t - 1];
            st.out_order = t + 1 == path.nodes.size() ? 1 : path.orders[t];
            st.space = eng.e(st.out_order, st.in_order, st.weight, st.degree);
            chain.stations.push_back(std::move(st));
        }
        for (std::size_t t = 0; t + 1 < chain.stations.size(); ++t) {
            Station &st = chain.stations[t];
            const Station &next = chain.stations[t + 1];
            Matrix m(next.space.dim(), st.space.dim());
            for (std::size_t c = 0; c < st.space.dim(); ++c) {
                Vector x = st.space.vector(c);
                auto wc = eng.witnesses(st.out_order, st.weight, st.degree, x);
                if (!wc)
                    throw std::logic_error("station vector without witnesses");
                st.summand_orders.insert(wc->summand_orders.begin(), wc->summand_orders.end());
                Vector y = eng.reducer(st.out_order, next.weight, next.degree) * wc->output;
                if (!next.space.contains(y))
                    throw std::logic_error("Δ leaves the next station");
                m.set_col(c, next.space.coordinates(y));
            }
            st.delta = std::move(m);
        }
        for (std::size_t t = 0; t + 2 < chain.stations.size(); ++t)
            if (!(chain.stations[t + 1].delta * chain.stations[t].delta).is_zero())
                chain.composition_zero = false;
        result.chains.push_back(std::move(chain));
    }
    return result;
}

struct StabilizedCohomology {
    std::map<int, std::size_t> per_weight;
    std::size_t total = 0;
    bool stabilized = true;
    // smallest J, L with Z_{J+1} = Z_∞ and B_{L+1} = B_∞, per weight
    std::map<int, int> z_index;
    std::map<int, int> b_index;
};

inline StabilizedCohomology stabilized_cohomology(SpectralEngine &eng, int k) {
    StabilizedCohomology out;
    const auto &mc = eng.data();
    int inf = eng.infinity();
    for (int p = 0; p <= mc.Q; ++p) {
        if (mc.dim(Bidegree::at(p, k)) == 0)
            continue;
        const Subspace &zi = eng.z(inf, p, k);
        const Subspace &bi = eng.b(inf, p, k);
        if (!(eng.z(inf - 1, p, k) == zi) || !(eng.b(inf - 1, p, k) == bi))
            out.stabilized = false;
        int J = 0;
        while (!(eng.z(J + 1, p, k) == zi))
            ++J;
        int L = 0;
        while (!(eng.b(L + 1, p, k) == bi))
            ++L;
        out.z_index[p] = J;
        out.b_index[p] = L;
        out.per_weight[p] = zi.dim() - bi.dim();
        out.total += zi.dim() - bi.dim();
    }
    return out;
}

} // namespace mcx
