#pragma once

#include "mcx/multicomplex.hpp"
#include "mcx/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace mcx {

struct Bracket {
    int i = 0; // 0-based, i < j
    int j = 0;
    int k = 0;
    Scalar c;
};

struct CarnotAlgebraSpec {
    int dim = 0;
    std::vector<int> weights;
    std::vector<Bracket> brackets;
    int poly_degree = 0;

    int step() const { return weights.empty() ? 0 : *std::max_element(weights.begin(), weights.end()); }

    int volume_weight() const {
        int q = 0;
        for (int w : weights)
            q += w;
        return q;
    }

    // c[i][j][k] with antisymmetry filled in
    std::vector<std::vector<std::vector<Scalar>>> structure_constants() const {
        std::vector<std::vector<std::vector<Scalar>>> c(
            dim, std::vector<std::vector<Scalar>>(dim, std::vector<Scalar>(dim)));
        for (const auto &br : brackets) {
            c[br.i][br.j][br.k] += br.c;
            c[br.j][br.i][br.k] -= br.c;
        }
        return c;
    }
};

struct LieReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline LieReport validate_lie(const CarnotAlgebraSpec &spec) {
    LieReport rep;
    auto bad = [&](const std::string &msg) { rep.violations.push_back(msg); };
    if (spec.dim <= 0)
        bad("dimension must be positive");
    if (static_cast<int>(spec.weights.size()) != spec.dim)
        bad("expected " + std::to_string(spec.dim) + " weights");
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        if (spec.weights[i] <= 0)
            bad("weight of X" + std::to_string(i + 1) + " is not positive");
        if (i > 0 && spec.weights[i] < spec.weights[i - 1])
            bad("weights are not nondecreasing at X" + std::to_string(i + 1));
    }
    if (spec.poly_degree < 0)
        bad("poly_degree must be non-negative");
    if (!rep.ok())
        return rep;
    auto triple = [](int i, int j, int k) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
    };
    for (const auto &br : spec.brackets) {
        if (br.i < 0 || br.j < 0 || br.k < 0 || br.i >= spec.dim || br.j >= spec.dim || br.k >= spec.dim) {
            bad("bracket index out of range " + triple(br.i, br.j, br.k));
            continue;
        }
        if (br.i >= br.j)
            bad("bracket " + triple(br.i, br.j, br.k) + " must have i < j (antisymmetry is implied)");
    }
    if (!rep.ok())
        return rep;
    auto c = spec.structure_constants();
    for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j < spec.dim; ++j)
            for (int k = 0; k < spec.dim; ++k)
                if (!is_zero(c[i][j][k]) && i < j && spec.weights[k] != spec.weights[i] + spec.weights[j])
                    bad("grading: weight(X" + std::to_string(k + 1) + ") != weight(X" +
                        std::to_string(i + 1) + ") + weight(X" + std::to_string(j + 1) + ") at " +
                        triple(i, j, k));
    // [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] = 0
    for (int i = 0; i < spec.dim; ++i)
        for (int j = i + 1; j < spec.dim; ++j)
            for (int k = j + 1; k < spec.dim; ++k)
                for (int m = 0; m < spec.dim; ++m) {
                    Scalar s = 0;
                    for (int l = 0; l < spec.dim; ++l)
                        s += c[i][j][l] * c[l][k][m] + c[j][k][l] * c[l][i][m] + c[k][i][l] * c[l][j][m];
                    if (!is_zero(s)) {
                        bad("Jacobi fails on " + triple(i, j, k));
                        break;
                    }
                }
    return rep;
}

// Lie algebra element with polynomial coordinates.
using LieElement = std::vector<Polynomial>;

inline LieElement lie_bracket(const CarnotAlgebraSpec &spec, const LieElement &a, const LieElement &b) {
    std::size_t vars = a.front().vars();
    LieElement out(spec.dim, Polynomial(vars));
    for (const auto &br : spec.brackets) {
        if (a[br.i].is_zero() && a[br.j].is_zero())
            continue;
        Polynomial t = a[br.i] * b[br.j] - a[br.j] * b[br.i];
        if (!t.is_zero())
            out[br.k] += br.c * t;
    }
    return out;
}

// Group product z(x, y) in exponential coordinates of the first kind, as
// polynomials in x_1..x_n, y_1..y_n (variables 0..n-1 and n..2n-1).
struct GroupLaw {
    int dim = 0;
    std::vector<Polynomial> product;

    Vector multiply(const Vector &x, const Vector &y) const {
        Vector point(x);
        point.insert(point.end(), y.begin(), y.end());
        Vector z(dim);
        for (int k = 0; k < dim; ++k)
            z[k] = product[k].evaluate(point);
        return z;
    }
};

// Dynkin's form of the BCH series, truncated at nesting depth = step:
// Σ_n (-1)^{n-1}/n Σ [X^{r1} Y^{s1} ... X^{rn} Y^{sn}] / (m Π r_i! s_i!)
// with right-nested brackets of total length m.
inline GroupLaw bch_group_law(const CarnotAlgebraSpec &spec) {
    const std::size_t vars = 2 * static_cast<std::size_t>(spec.dim);
    LieElement X(spec.dim, Polynomial(vars)), Y(spec.dim, Polynomial(vars));
    for (int i = 0; i < spec.dim; ++i) {
        X[i] = Polynomial::variable(vars, i);
        Y[i] = Polynomial::variable(vars, spec.dim + i);
    }
    LieElement total(spec.dim, Polynomial(vars));
    auto factorial = [](int n) {
        mpz_class f = 1;
        for (int k = 2; k <= n; ++k)
            f *= k;
        return f;
    };
    const int depth = spec.step();
    for (int m = 1; m <= depth; ++m) {
        // letters of each word, with the coefficient collected per word
        std::map<std::vector<int>, Scalar> words;
        std::vector<std::pair<int, int>> blocks;
        std::function<void(int)> enumerate = [&](int left) {
            if (left == 0) {
                int n = static_cast<int>(blocks.size());
                mpz_class denom = m;
                std::vector<int> word;
                for (auto [r, s] : blocks) {
                    denom *= factorial(r) * factorial(s);
                    word.insert(word.end(), r, 0);
                    word.insert(word.end(), s, 1);
                }
                Scalar coef(n % 2 == 1 ? 1 : -1);
                coef /= Scalar(mpz_class(n) * denom);
                words[word] += coef;
                return;
            }
            for (int r = 0; r <= left; ++r)
                for (int s = 0; r + s <= left; ++s) {
                    if (r + s == 0)
                        continue;
                    blocks.push_back({r, s});
                    enumerate(left - r - s);
                    blocks.pop_back();
                }
        };
        enumerate(m);
        for (const auto &[word, coef] : words) {
            if (is_zero(coef))
                continue;
            LieElement acc = word.back() == 0 ? X : Y;
            bool vanished = false;
            for (int t = static_cast<int>(word.size()) - 2; t >= 0 && !vanished; --t) {
                acc = lie_bracket(spec, word[t] == 0 ? X : Y, acc);
                vanished = std::all_of(acc.begin(), acc.end(), [](const Polynomial &p) { return p.is_zero(); });
            }
            if (vanished)
                continue;
            for (int k = 0; k < spec.dim; ++k)
                total[k] += coef * acc[k];
        }
    }
    return {spec.dim, total};
}

// Derivation Σ_k coefficient[k] ∂_k with polynomial coefficients.
struct VectorField {
    std::vector<Polynomial> coefficient;

    Polynomial apply(const Polynomial &f) const {
        Polynomial out(f.vars());
        for (std::size_t k = 0; k < coefficient.size(); ++k)
            if (!coefficient[k].is_zero())
                out += coefficient[k] * f.derivative(k);
        return out;
    }

    friend bool operator==(const VectorField &a, const VectorField &b) {
        return a.coefficient == b.coefficient;
    }
};

// X_i f(x) = d/dt f(x · exp(t e_i)) at t = 0
inline std::vector<VectorField> left_invariant_fields(const CarnotAlgebraSpec &spec, const GroupLaw &law) {
    const std::size_t n = static_cast<std::size_t>(spec.dim);
    std::vector<VectorField> fields(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            fields[i].coefficient.push_back(law.product[k].derivative(n + i).truncate_vars(n));
    return fields;
}

inline VectorField field_bracket(const VectorField &a, const VectorField &b) {
    VectorField out;
    for (std::size_t k = 0; k < a.coefficient.size(); ++k)
        out.coefficient.push_back(a.apply(b.coefficient[k]) - b.apply(a.coefficient[k]));
    return out;
}

// [X_i, X_j] = Σ_k c_ij^k X_k for every pair, on the fields themselves
inline bool fields_match_brackets(const CarnotAlgebraSpec &spec, const std::vector<VectorField> &fields) {
    auto c = spec.structure_constants();
    const std::size_t n = fields.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            VectorField lhs = field_bracket(fields[i], fields[j]);
            VectorField rhs;
            rhs.coefficient.assign(n, Polynomial(n));
            for (std::size_t k = 0; k < n; ++k)
                if (!is_zero(c[i][j][k]))
                    for (std::size_t m = 0; m < n; ++m)
                        rhs.coefficient[m] += c[i][j][k] * fields[k].coefficient[m];
            if (!(lhs == rhs))
                return false;
        }
    return true;
}

inline bool group_law_associative(const GroupLaw &law, int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    auto draw = [&] {
        Vector v(law.dim);
        for (auto &x : v)
            x = Scalar(num(rng), den(rng));
        for (auto &x : v)
            x.canonicalize();
        return v;
    };
    for (int t = 0; t < trials; ++t) {
        Vector a = draw(), b = draw(), c = draw();
        if (law.multiply(law.multiply(a, b), c) != law.multiply(a, law.multiply(b, c)))
            return false;
    }
    return true;
}

// Monomials of weighted degree <= D, ordered by degree then exponents
// in decreasing lexicographic order.
inline std::vector<Exponents> coefficient_monomials(const std::vector<int> &weights, int D) {
    std::vector<Exponents> out;
    Exponents e(weights.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t v, int left) {
        if (v == weights.size()) {
            out.push_back(e);
            return;
        }
        for (int k = 0; k * weights[v] <= left; ++k) {
            e[v] = k;
            rec(v + 1, left - k * weights[v]);
        }
        e[v] = 0;
    };
    rec(0, D);
    std::sort(out.begin(), out.end(), [&](const Exponents &a, const Exponents &b) {
        int da = weighted_degree(a, weights), db = weighted_degree(b, weights);
        if (da != db)
            return da < db;
        return a > b;
    });
    return out;
}

// Sorts a list of covector indices, returning the permutation sign, or 0
// when an index repeats.
inline int sort_wedge(std::vector<int> &idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j])
                return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

struct DerhamOptions {
    // pair the coefficient polynomials with their dual module, so that the
    // Hodge star intertwines d_i with its transpose
    bool self_dual = false;
};

struct CoefficientModule {
    std::vector<std::string> labels;
    // action of each X_j
    std::vector<Matrix> action;
    Matrix star;
};

inline CoefficientModule coefficient_module(const CarnotAlgebraSpec &spec, const DerhamOptions &opt) {
    auto law = bch_group_law(spec);
    auto fields = left_invariant_fields(spec, law);
    auto monos = coefficient_monomials(spec.weights, spec.poly_degree);
    std::map<Exponents, std::size_t> index;
    for (std::size_t c = 0; c < monos.size(); ++c)
        index[monos[c]] = c;
    const std::size_t m = monos.size();
    CoefficientModule mod;
    for (const auto &e : monos)
        mod.labels.push_back(monomial_label(e));
    for (int j = 0; j < spec.dim; ++j) {
        Matrix rho(m, m);
        for (std::size_t c = 0; c < m; ++c) {
            Polynomial img = fields[j].apply(Polynomial::monomial(monos[c]));
            for (const auto &[e, coef] : img.terms()) {
                auto it = index.find(e);
                if (it == index.end())
                    throw std::logic_error("field raised the polynomial degree");
                rho(it->second, c) = coef;
            }
        }
        mod.action.push_back(std::move(rho));
    }
    if (!opt.self_dual) {
        mod.star = Matrix::identity(m);
        return mod;
    }
    // M ⊕ M* with X acting by -Xᵀ on M*; the star swaps the two copies
    for (std::size_t c = 0; c < m; ++c)
        mod.labels.push_back("[" + mod.labels[c] + "]*");
    for (auto &rho : mod.action) {
        Matrix both(2 * m, 2 * m);
        both.set_block(0, 0, rho);
        both.set_block(m, m, -rho.transpose());
        rho = std::move(both);
    }
    mod.star = Matrix(2 * m, 2 * m);
    for (std::size_t c = 0; c < m; ++c) {
        mod.star(c, m + c) = 1;
        mod.star(m + c, c) = 1;
    }
    return mod;
}

inline std::string form_label(const std::string &coef, const std::vector<int> &cov) {
    if (cov.empty())
        return coef;
    std::string s = coef + " ";
    for (std::size_t t = 0; t < cov.size(); ++t)
        s += (t ? "^th" : "th") + std::to_string(cov[t] + 1);
    return s;
}

inline MulticomplexData polynomial_derham(const CarnotAlgebraSpec &spec, const DerhamOptions &opt = {}) {
    auto rep = validate_lie(spec);
    if (!rep.ok())
        throw std::invalid_argument("invalid Lie algebra: " + rep.violations.front());
    const int n = spec.dim;
    CoefficientModule mod = coefficient_module(spec, opt);
    const std::size_t m = mod.labels.size();

    // covector monomials grouped by bidegree, lexicographic inside
    std::map<Bidegree, std::vector<std::vector<int>>> covs;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        int w = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) {
                idx.push_back(i);
                w += spec.weights[i];
            }
        covs[Bidegree::at(w, static_cast<int>(idx.size()))].push_back(idx);
    }
    for (auto &[bd, list] : covs)
        std::sort(list.begin(), list.end());

    MulticomplexData mc;
    mc.Q = spec.volume_weight();
    mc.s = spec.step() + 1;
    ExteriorData ext;
    ext.weights = spec.weights;
    ext.coefficient_dim = m;
    ext.coefficient_star = mod.star;
    std::map<std::pair<std::size_t, std::vector<int>>, std::pair<Bidegree, std::size_t>> where;
    for (const auto &[bd, list] : covs) {
        Space sp;
        auto &forms = ext.forms[bd];
        for (const auto &cov : list)
            for (std::size_t c = 0; c < m; ++c) {
                where[{c, cov}] = {bd, forms.size()};
                forms.push_back({c, cov});
                sp.labels.push_back(form_label(mod.labels[c], cov));
            }
        sp.dim = forms.size();
        mc.spaces[bd] = sp;
    }

    // d θ_k = -Σ_{i<j} c_ij^k θ_i ∧ θ_j
    auto c = spec.structure_constants();
    auto ce_of = [&](const std::vector<int> &cov) {
        std::map<std::vector<int>, Scalar> out;
        for (std::size_t t = 0; t < cov.size(); ++t) {
            Scalar sign = t % 2 == 0 ? 1 : -1;
            int k = cov[t];
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    if (is_zero(c[i][j][k]))
                        continue;
                    std::vector<int> idx(cov.begin(), cov.begin() + static_cast<std::ptrdiff_t>(t));
                    idx.push_back(i);
                    idx.push_back(j);
                    idx.insert(idx.end(), cov.begin() + static_cast<std::ptrdiff_t>(t) + 1, cov.end());
                    int s = sort_wedge(idx);
                    if (s == 0)
                        continue;
                    out[idx] += -sign * c[i][j][k] * s;
                }
        }
        return out;
    };
    for (const auto &[bd, list] : covs) {
        std::map<int, Matrix> out;
        auto target_of = [&](int i) { return Bidegree{bd.a + i, bd.b + 1 - i}; };
        auto touch = [&](int i) -> Matrix & {
            auto it = out.find(i);
            if (it == out.end())
                it = out.emplace(i, Matrix(mc.dim(target_of(i)), mc.dim(bd))).first;
            return it->second;
        };
        const auto &forms = ext.forms[bd];
        for (std::size_t col = 0; col < forms.size(); ++col) {
            const auto &f = forms[col];
            for (const auto &[idx, coef] : ce_of(f.covectors)) {
                if (is_zero(coef))
                    continue;
                auto [tb, row] = where.at({f.coef, idx});
                touch(0)(row, col) += coef;
            }
            // (X_j f) θ_j ∧ θ_I
            for (int j = 0; j < n; ++j) {
                std::vector<int> idx{j};
                idx.insert(idx.end(), f.covectors.begin(), f.covectors.end());
                int s = sort_wedge(idx);
                if (s == 0)
                    continue;
                const Matrix &rho = mod.action[j];
                for (std::size_t c2 = 0; c2 < m; ++c2) {
                    if (is_zero(rho(c2, f.coef)))
                        continue;
                    auto [tb, row] = where.at({c2, idx});
                    touch(spec.weights[j])(row, col) += s * rho(c2, f.coef);
                }
            }
        }
        for (auto &[i, mat] : out)
            if (!mat.is_zero())
                mc.set_map(i, bd, std::move(mat));
    }
    mc.exterior = std::move(ext);
    return mc;
}

inline CarnotAlgebraSpec make_spec(int dim, std::vector<int> weights,
                                   std::vector<std::tuple<int, int, int>> unit_brackets, int D) {
    CarnotAlgebraSpec spec;
    spec.dim = dim;
    spec.weights = std::move(weights);
    for (auto [i, j, k] : unit_brackets)
        spec.brackets.push_back({i - 1, j - 1, k - 1, Scalar(1)});
    spec.poly_degree = D;
    return spec;
}

// Known algebras: heisenberg1, heisenberg2, engel, abelian-<n>,
// step2-free-<n> (free 2-step nilpotent on n generators).
inline CarnotAlgebraSpec catalog(const std::string &name, int poly_degree = 3) {
    CarnotAlgebraSpec spec;
    auto suffix = [&](const std::string &prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0)
            return std::nullopt;
        std::string rest = name.substr(prefix.size());
        if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit))
            return std::nullopt;
        return std::stoi(rest);
    };
    if (name == "heisenberg1") {
        spec = make_spec(3, {1, 1, 2}, {{1, 2, 3}}, poly_degree);
    } else if (name == "heisenberg2") {
        spec = make_spec(5, {1, 1, 1, 1, 2}, {{1, 2, 5}, {3, 4, 5}}, poly_degree);
    } else if (name == "engel") {
        spec = make_spec(4, {1, 1, 2, 3}, {{1, 2, 3}, {1, 3, 4}}, poly_degree);
    } else if (auto n = suffix("abelian-"); n && *n >= 1) {
        spec = make_spec(*n, std::vector<int>(*n, 1), {}, poly_degree);
    } else if (auto g = suffix("step2-free-"); g && *g >= 2) {
        std::vector<int> weights(*g, 1);
        std::vector<std::tuple<int, int, int>> br;
        int next = *g;
        for (int i = 1; i <= *g; ++i)
            for (int j = i + 1; j <= *g; ++j) {
                weights.push_back(2);
                br.push_back({i, j, ++next});
            }
        spec = make_spec(next, weights, br, poly_degree);
    } else {
        throw std::invalid_argument("unknown algebra '" + name + "'");
    }
    return spec;
}

} // namespace mcx
