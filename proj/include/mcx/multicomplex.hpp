#pragma once

#include "mcx/linear.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace mcx {

// Position (a, b) in the bigrading: a is the weight, a + b the degree.
struct Bidegree {
    int a = 0;
    int b = 0;

    int weight() const { return a; }
    int degree() const { return a + b; }

    static Bidegree at(int weight, int degree) { return {weight, degree - weight}; }

    auto operator<=>(const Bidegree &) const = default;
};

inline std::string to_string(Bidegree bd) {
    return "(" + std::to_string(bd.a) + "," + std::to_string(bd.b) + ")";
}

struct Space {
    std::size_t dim = 0;
    std::vector<std::string> labels;
};

// The map d_i leaving `source`.
struct MapKey {
    int i = 0;
    Bidegree source;

    Bidegree target() const { return {source.a + i, source.b + 1 - i}; }

    auto operator<=>(const MapKey &) const = default;
};

// A basis form: coefficient index tensor a wedge of covector generators
// (0-based, strictly increasing).
struct FormElement {
    std::size_t coef = 0;
    std::vector<int> covectors;

    auto operator<=>(const FormElement &) const = default;
};

// Exterior-algebra structure carried by multicomplexes built from a Lie
// algebra, needed for the Hodge star.
struct ExteriorData {
    std::vector<int> weights;
    std::size_t coefficient_dim = 0;
    // orthogonal involution pairing the coefficient module with its dual
    Matrix coefficient_star;
    std::map<Bidegree, std::vector<FormElement>> forms;

    int generators() const { return static_cast<int>(weights.size()); }
};

struct MulticomplexData {
    int Q = 0;
    int s = 1;
    std::map<Bidegree, Space> spaces;
    std::map<MapKey, Matrix> maps;
    std::optional<ExteriorData> exterior;

    std::size_t dim(Bidegree bd) const {
        auto it = spaces.find(bd);
        return it == spaces.end() ? 0 : it->second.dim;
    }

    // d_i leaving `source`, zero of the right shape when absent
    Matrix d(int i, Bidegree source) const {
        MapKey key{i, source};
        auto it = maps.find(key);
        if (it != maps.end())
            return it->second;
        return Matrix(dim(key.target()), dim(source));
    }

    bool has_map(int i, Bidegree source) const { return maps.count(MapKey{i, source}) > 0; }

    void set_map(int i, Bidegree source, Matrix m) { maps[MapKey{i, source}] = std::move(m); }

    std::set<int> degrees() const {
        std::set<int> out;
        for (const auto &[bd, sp] : spaces)
            if (sp.dim > 0)
                out.insert(bd.degree());
        return out;
    }

    std::size_t total_dim() const {
        std::size_t n = 0;
        for (const auto &[bd, sp] : spaces)
            n += sp.dim;
        return n;
    }

    std::vector<Bidegree> bidegrees() const {
        std::vector<Bidegree> out;
        for (const auto &[bd, sp] : spaces)
            if (sp.dim > 0)
                out.push_back(bd);
        return out;
    }
};

struct RelationViolation {
    int n = 0;
    Bidegree at;

    auto operator<=>(const RelationViolation &) const = default;
};

struct ValidationReport {
    std::vector<std::string> structural;
    std::vector<RelationViolation> relations;

    bool ok() const { return structural.empty() && relations.empty(); }

    std::string describe() const {
        std::ostringstream os;
        for (const auto &e : structural)
            os << "structural: " << e << "\n";
        for (const auto &v : relations)
            os << "relation n=" << v.n << " fails at " << to_string(v.at) << "\n";
        return os.str();
    }
};

inline ValidationReport validate_multicomplex(const MulticomplexData &mc) {
    ValidationReport rep;
    if (mc.Q < 0)
        rep.structural.push_back("Q must be non-negative");
    if (mc.s < 1)
        rep.structural.push_back("s must be at least 1");
    for (const auto &[bd, sp] : mc.spaces) {
        if (bd.a < 0 || bd.a > mc.Q)
            rep.structural.push_back("space " + to_string(bd) + " has weight outside [0, Q]");
        if (!sp.labels.empty() && sp.labels.size() != sp.dim)
            rep.structural.push_back("space " + to_string(bd) + " has " +
                                     std::to_string(sp.labels.size()) + " labels for dim " +
                                     std::to_string(sp.dim));
    }
    for (const auto &[key, m] : mc.maps) {
        std::string where = "d_" + std::to_string(key.i) + " at " + to_string(key.source);
        if (key.i < 0 || key.i >= mc.s)
            rep.structural.push_back(where + " has index outside [0, s)");
        if (m.rows() != mc.dim(key.target()) || m.cols() != mc.dim(key.source))
            rep.structural.push_back(where + " is " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()) + ", expected " +
                                     std::to_string(mc.dim(key.target())) + "x" +
                                     std::to_string(mc.dim(key.source)));
    }
    if (!rep.structural.empty())
        return rep;
    for (int n = 0; n <= 2 * (mc.s - 1); ++n)
        for (const auto &bd : mc.bidegrees()) {
            Bidegree target{bd.a + n, bd.b + 2 - n};
            Matrix sum(mc.dim(target), mc.dim(bd));
            for (int j = 0; j <= n; ++j) {
                int i = n - j;
                if (i >= mc.s || j >= mc.s || !mc.has_map(j, bd))
                    continue;
                Bidegree mid{bd.a + j, bd.b + 1 - j};
                if (!mc.has_map(i, mid))
                    continue;
                sum += mc.d(i, mid) * mc.d(j, bd);
            }
            if (!sum.is_zero())
                rep.relations.push_back({n, bd});
        }
    std::sort(rep.relations.begin(), rep.relations.end());
    return rep;
}

// Coordinates of one total degree: populated weights in increasing order,
// each occupying a contiguous block.
struct DegreeLayout {
    int degree = 0;
    std::vector<int> weights;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> dims;
    std::size_t dim = 0;

    std::optional<std::size_t> block(int weight) const {
        auto it = std::find(weights.begin(), weights.end(), weight);
        if (it == weights.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - weights.begin());
    }

    Vector restrict_to(int weight, const Vector &x) const {
        auto k = block(weight);
        if (!k)
            return {};
        return Vector(x.begin() + static_cast<std::ptrdiff_t>(offsets[*k]),
                      x.begin() + static_cast<std::ptrdiff_t>(offsets[*k] + dims[*k]));
    }

    Vector embed(int weight, const Vector &y) const {
        Vector x(dim);
        auto k = block(weight);
        if (!k)
            return x;
        std::copy(y.begin(), y.end(), x.begin() + static_cast<std::ptrdiff_t>(offsets[*k]));
        return x;
    }
};

class TotalComplex {
  public:
    TotalComplex() = default;

    explicit TotalComplex(const MulticomplexData &mc) : Q_(mc.Q) {
        for (const auto &bd : mc.bidegrees()) {
            auto &lay = layouts_[bd.degree()];
            lay.degree = bd.degree();
            lay.weights.push_back(bd.a);
            lay.dims.push_back(mc.dim(bd));
        }
        for (auto &[h, lay] : layouts_) {
            std::size_t off = 0;
            for (auto d : lay.dims) {
                lay.offsets.push_back(off);
                off += d;
            }
            lay.dim = off;
        }
        for (const auto &[h, lay] : layouts_) {
            for (int i = 0; i < mc.s; ++i)
                pieces_[{i, h}] = assemble(h, h + 1, [&](int a, int a2) -> std::optional<Matrix> {
                    if (a2 != a + i || !mc.has_map(i, Bidegree::at(a, h)))
                        return std::nullopt;
                    return mc.d(i, Bidegree::at(a, h));
                });
            Matrix sum(dim(h + 1), dim(h));
            for (int i = 0; i < mc.s; ++i)
                sum += pieces_[{i, h}];
            D_[h] = std::move(sum);
        }
    }

    int Q() const { return Q_; }

    std::vector<int> degrees() const {
        std::vector<int> out;
        for (const auto &[h, lay] : layouts_)
            out.push_back(h);
        return out;
    }

    const DegreeLayout &layout(int h) const {
        static const DegreeLayout empty{};
        auto it = layouts_.find(h);
        return it == layouts_.end() ? empty : it->second;
    }

    std::size_t dim(int h) const { return layout(h).dim; }

    // D[h]: Tot_h -> Tot_{h+1}
    Matrix differential(int h) const {
        auto it = D_.find(h);
        return it == D_.end() ? Matrix(dim(h + 1), dim(h)) : it->second;
    }

    // the weight-i part of D[h]
    Matrix piece(int i, int h) const {
        auto it = pieces_.find({i, h});
        return it == pieces_.end() ? Matrix(dim(h + 1), dim(h)) : it->second;
    }

    // Builds a Tot_h -> Tot_h2 matrix from per-weight blocks; `block(a, a2)`
    // returns the block from weight a to weight a2, or nothing when zero.
    template <class BlockFn> Matrix assemble(int h, int h2, BlockFn &&block) const {
        const auto &src = layout(h);
        const auto &dst = layout(h2);
        Matrix m(dst.dim, src.dim);
        for (std::size_t p = 0; p < src.weights.size(); ++p)
            for (std::size_t q = 0; q < dst.weights.size(); ++q) {
                std::optional<Matrix> b = block(src.weights[p], dst.weights[q]);
                if (b)
                    m.set_block(dst.offsets[q], src.offsets[p], *b);
            }
        return m;
    }

    Matrix block_of(const Matrix &m, int h, int a, int h2, int a2) const {
        const auto &src = layout(h);
        const auto &dst = layout(h2);
        auto p = src.block(a);
        auto q = dst.block(a2);
        if (!p || !q)
            return Matrix(q ? dst.dims[*q] : 0, p ? src.dims[*p] : 0);
        return m.block(dst.offsets[*q], src.offsets[*p], dst.dims[*q], src.dims[*p]);
    }

  private:
    int Q_ = 0;
    std::map<int, DegreeLayout> layouts_;
    std::map<int, Matrix> D_;
    std::map<std::pair<int, int>, Matrix> pieces_;
};

inline TotalComplex total_complex(const MulticomplexData &mc) {
    auto rep = validate_multicomplex(mc);
    if (!rep.ok())
        throw std::invalid_argument("invalid multicomplex:\n" + rep.describe());
    return TotalComplex(mc);
}

struct CohomologyGroup {
    std::size_t dim = 0;
    Subspace representatives;
};

inline CohomologyGroup total_cohomology(const TotalComplex &tc, int h) {
    Subspace cycles = kernel(tc.differential(h));
    Subspace boundaries = image(tc.differential(h - 1));
    Subspace reps = intersect(cycles, orthogonal_complement(boundaries));
    return {cycles.dim() - boundaries.dim(), reps};
}

} // namespace mcx
