#pragma once

// Textbook spectral sequence of the weight filtration on the total complex.
// Uses only the linear core and the total complex, never the Hodge or
// Rumin machinery, so it can serve as an independent check.

#include "mcx/multicomplex.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace mcx {

struct ClassicalCell {
    std::size_t dim = 0;
    // rank of d_r : E_r^{p,h} -> E_r^{p+r,h+1}
    std::size_t rank_out = 0;
};

struct ClassicalPages {
    int r_max = 0;
    // keyed by (r, p, h) with h the total degree
    std::map<std::tuple<int, int, int>, ClassicalCell> cells;

    ClassicalCell at(int r, int p, int h) const {
        auto it = cells.find({r, p, h});
        return it == cells.end() ? ClassicalCell{} : it->second;
    }
};

namespace detail {

class FiltrationOracle {
  public:
    explicit FiltrationOracle(const TotalComplex &tc) : tc_(tc) {}

    // F^p Tot_h: coordinates of weight >= p
    Subspace filtration(int p, int h) const {
        const auto &lay = tc_.layout(h);
        std::vector<Vector> vs;
        for (std::size_t blk = 0; blk < lay.weights.size(); ++blk) {
            if (lay.weights[blk] < p)
                continue;
            for (std::size_t c = 0; c < lay.dims[blk]; ++c) {
                Vector v(lay.dim);
                v[lay.offsets[blk] + c] = 1;
                vs.push_back(std::move(v));
            }
        }
        return span(vs, lay.dim);
    }

    // Z_r^{p,h} = F^p ∩ d^{-1} F^{p+r}
    const Subspace &cycles(int r, int p, int h) {
        auto key = std::make_tuple(r, p, h);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        Subspace out = intersect(filtration(p, h), preimage(tc_.differential(h), filtration(p + r, h + 1)));
        return memo_.emplace(key, std::move(out)).first->second;
    }

    // Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}
    Subspace denominator(int r, int p, int h) {
        Subspace deeper = cycles(r - 1, p + 1, h);
        Subspace bounds = map_subspace(tc_.differential(h - 1), cycles(r - 1, p - r + 1, h - 1));
        return subspace_sum(deeper, bounds);
    }

  private:
    const TotalComplex &tc_;
    std::map<std::tuple<int, int, int>, Subspace> memo_;
};

} // namespace detail

inline ClassicalPages classical_pages(const TotalComplex &tc, int r_max) {
    ClassicalPages pages;
    pages.r_max = r_max;
    detail::FiltrationOracle oracle(tc);
    for (int r = 1; r <= r_max; ++r)
        for (int h : tc.degrees())
            for (int p : tc.layout(h).weights) {
                ClassicalCell cell;
                const Subspace &z = oracle.cycles(r, p, h);
                Subspace den = oracle.denominator(r, p, h);
                cell.dim = z.dim() - den.dim();
                if (tc.dim(h + 1) > 0) {
                    Subspace tden = oracle.denominator(r, p + r, h + 1);
                    Subspace img = map_subspace(tc.differential(h), z);
                    cell.rank_out = subspace_sum(img, tden).dim() - tden.dim();
                }
                pages.cells[{r, p, h}] = cell;
            }
    return pages;
}

// dim E_{r+1} = dim E_r - rank out - rank in, at every cell
inline bool page_recursion_holds(const ClassicalPages &pages) {
    for (const auto &[key, cell] : pages.cells) {
        auto [r, p, h] = key;
        if (r + 1 > pages.r_max)
            continue;
        std::size_t in = pages.at(r, p - r, h - 1).rank_out;
        if (pages.at(r + 1, p, h).dim + cell.rank_out + in != cell.dim)
            return false;
    }
    return true;
}

struct PageMismatch {
    int r = 0;
    int p = 0;
    int h = 0;
    std::string what;
};

struct OracleComparison {
    std::size_t cells_compared = 0;
    std::vector<PageMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Compares against any engine exposing page_dim(r,p,k) and delta_rank(r,p,k).
template <class Engine>
OracleComparison compare(const ClassicalPages &classical, Engine &engine) {
    OracleComparison out;
    for (const auto &[key, cell] : classical.cells) {
        auto [r, p, h] = key;
        ++out.cells_compared;
        std::size_t dim = engine.page_dim(r, p, h);
        if (dim != cell.dim)
            out.mismatches.push_back({r, p, h, "page dim " + std::to_string(dim) + " vs classical " +
                                                   std::to_string(cell.dim)});
        std::size_t rank = engine.delta_rank(r, p, h);
        if (rank != cell.rank_out)
            out.mismatches.push_back({r, p, h, "differential rank " + std::to_string(rank) +
                                                   " vs classical " + std::to_string(cell.rank_out)});
    }
    return out;
}

} // namespace mcx
