#pragma once

#include "mcx/multicomplex.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace mcx {

struct RandomParams {
    int Q = 3;
    int min_degree = 0;
    int max_degree = 3;
    std::size_t max_total_dim = 16;
    // largest weight jump of a cancelling pair in the split complex; 0 gives
    // a weight-preserving e
    int max_gap = 2;
    bool conjugate = true;
    // density of the weight-increasing part of g, in percent
    int conjugation_density = 40;
    // when set, per degree (indexed from min_degree) the weights allowed for
    // vectors that survive to E_1; gap-0 pairs may still sit anywhere
    std::optional<std::vector<std::vector<int>>> visible_weights;
};

// One cancelling pair source -> target of the split complex.
struct SplitPair {
    Bidegree source;
    Bidegree target;

    int gap() const { return target.a - source.a; }
};

struct GeneratedMulticomplex {
    MulticomplexData data;
    // dim H^h(e), which equals dim H^h(Tot, d)
    std::map<int, std::size_t> cohomology;
    std::vector<SplitPair> pairs;
    std::vector<Bidegree> survivors;
};

namespace detail {

// random unit lower times unit upper triangular matrix, integral with
// integral inverse
inline Matrix random_unimodular(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> coin(-1, 1);
    Matrix lo = Matrix::identity(n), up = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            lo(i, j) = coin(rng);
            up(j, i) = coin(rng);
        }
    return lo * up;
}

inline bool allowed(const RandomParams &p, int degree, int weight) {
    if (!p.visible_weights)
        return true;
    std::size_t idx = static_cast<std::size_t>(degree - p.min_degree);
    if (idx >= p.visible_weights->size())
        return false;
    const auto &w = (*p.visible_weights)[idx];
    return std::find(w.begin(), w.end(), weight) != w.end();
}

} // namespace detail

// Builds d = g e g^{-1} with e a weight-non-decreasing split differential in
// a random basis and g = Id + n, n strictly weight-increasing. Each pair of
// the split complex with weight jump j contributes to the pages up to E_j.
inline GeneratedMulticomplex random_conjugated_multicomplex(std::uint64_t seed,
                                                            const RandomParams &params) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    GeneratedMulticomplex out;
    std::size_t target_dim =
        static_cast<std::size_t>(uniform(static_cast<int>(params.max_total_dim) / 2,
                                         static_cast<int>(params.max_total_dim)));
    std::size_t used = 0;
    int attempts = 0;
    while (used < target_dim && attempts < 400) {
        ++attempts;
        int h = uniform(params.min_degree, params.max_degree);
        int a = uniform(0, params.Q);
        bool make_pair = h < params.max_degree && uniform(0, 2) > 0 && used + 2 <= target_dim;
        if (make_pair) {
            int gap = uniform(0, params.max_gap);
            int a2 = a + gap;
            if (a2 > params.Q)
                continue;
            if (gap > 0 && (!detail::allowed(params, h, a) || !detail::allowed(params, h + 1, a2)))
                continue;
            out.pairs.push_back({Bidegree::at(a, h), Bidegree::at(a2, h + 1)});
            used += 2;
        } else {
            if (!detail::allowed(params, h, a))
                continue;
            out.survivors.push_back(Bidegree::at(a, h));
            used += 1;
        }
    }

    // split-complex basis: index of every vector inside its bidegree
    MulticomplexData &mc = out.data;
    mc.Q = params.Q;
    std::map<Bidegree, std::size_t> count;
    std::vector<std::pair<std::size_t, std::size_t>> pair_slots;
    for (const auto &pr : out.pairs)
        pair_slots.push_back({count[pr.source]++, count[pr.target]++});
    for (const auto &bd : out.survivors)
        ++count[bd];
    for (const auto &[bd, n] : count) {
        Space sp;
        sp.dim = n;
        for (std::size_t k = 0; k < n; ++k)
            sp.labels.push_back("v" + std::to_string(bd.a) + "_" + std::to_string(bd.b) + "_" +
                                std::to_string(k));
        mc.spaces[bd] = sp;
    }
    for (const auto &bd : out.survivors)
        ++out.cohomology[bd.degree()];
    for (int h = params.min_degree; h <= params.max_degree; ++h)
        out.cohomology[h] += 0;

    // split e, then a per-bidegree change of basis
    mc.s = params.Q + 1;
    for (std::size_t k = 0; k < out.pairs.size(); ++k) {
        const auto &pr = out.pairs[k];
        int i = pr.gap();
        if (!mc.has_map(i, pr.source))
            mc.set_map(i, pr.source, Matrix(mc.dim(pr.target), mc.dim(pr.source)));
        mc.maps[MapKey{i, pr.source}](pair_slots[k].second, pair_slots[k].first) = 1;
    }
    TotalComplex split(mc);
    std::map<int, Matrix> change, change_inv;
    for (int h : split.degrees()) {
        const auto &lay = split.layout(h);
        Matrix a(lay.dim, lay.dim);
        for (std::size_t k = 0; k < lay.weights.size(); ++k)
            a.set_block(lay.offsets[k], lay.offsets[k], detail::random_unimodular(lay.dims[k], rng));
        if (params.conjugate) {
            // weight-increasing part of g, applied on the left of the block change
            Matrix n(lay.dim, lay.dim);
            for (std::size_t p = 0; p < lay.weights.size(); ++p)
                for (std::size_t q = p + 1; q < lay.weights.size(); ++q)
                    for (std::size_t r = 0; r < lay.dims[q]; ++r)
                        for (std::size_t c = 0; c < lay.dims[p]; ++c)
                            if (uniform(0, 99) < params.conjugation_density)
                                n(lay.offsets[q] + r, lay.offsets[p] + c) = uniform(-2, 2);
            a = (Matrix::identity(lay.dim) + n) * a;
        }
        change[h] = a;
        change_inv[h] = inverse(a);
    }
    MulticomplexData result = mc;
    result.maps.clear();
    int max_i = 0;
    for (int h : split.degrees()) {
        if (split.dim(h + 1) == 0)
            continue;
        Matrix d = change[h + 1] * split.differential(h) * change_inv[h];
        for (int a : split.layout(h).weights)
            for (int a2 : split.layout(h + 1).weights) {
                Matrix blk = split.block_of(d, h, a, h + 1, a2);
                if (a2 < a) {
                    if (!blk.is_zero())
                        throw std::logic_error("conjugation lowered the weight");
                    continue;
                }
                if (blk.is_zero())
                    continue;
                result.set_map(a2 - a, Bidegree::at(a, h), blk);
                max_i = std::max(max_i, a2 - a);
            }
    }
    result.s = max_i + 1;
    out.data = std::move(result);
    return out;
}

} // namespace mcx
