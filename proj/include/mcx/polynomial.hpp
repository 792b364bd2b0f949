#pragma once

#include "mcx/linear.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcx {

using Exponents = std::vector<int>;

// Sparse multivariate polynomial with rational coefficients.
class Polynomial {
  public:
    explicit Polynomial(std::size_t vars = 0) : vars_(vars) {}

    static Polynomial constant(std::size_t vars, const Scalar &c) {
        Polynomial p(vars);
        if (!mcx::is_zero(c))
            p.terms_[Exponents(vars, 0)] = c;
        return p;
    }

    static Polynomial variable(std::size_t vars, std::size_t v) {
        Polynomial p(vars);
        Exponents e(vars, 0);
        e[v] = 1;
        p.terms_[e] = 1;
        return p;
    }

    static Polynomial monomial(const Exponents &e, const Scalar &c = 1) {
        Polynomial p(e.size());
        if (!mcx::is_zero(c))
            p.terms_[e] = c;
        return p;
    }

    std::size_t vars() const { return vars_; }
    const std::map<Exponents, Scalar> &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Scalar coefficient(const Exponents &e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    Polynomial &operator+=(const Polynomial &o) {
        for (const auto &[e, c] : o.terms_)
            accumulate(e, c);
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o) {
        for (const auto &[e, c] : o.terms_)
            accumulate(e, -c);
        return *this;
    }
    Polynomial &operator*=(const Scalar &c) {
        if (mcx::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto &[e, x] : terms_)
            x *= c;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Scalar &c, Polynomial a) { return a *= c; }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        Polynomial out(a.vars_);
        for (const auto &[ea, ca] : a.terms_)
            for (const auto &[eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t v = 0; v < e.size(); ++v)
                    e[v] += eb[v];
                out.accumulate(e, ca * cb);
            }
        return out;
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(std::size_t v) const {
        Polynomial out(vars_);
        for (const auto &[e, c] : terms_) {
            if (e[v] == 0)
                continue;
            Exponents d(e);
            --d[v];
            out.accumulate(d, c * e[v]);
        }
        return out;
    }

    Scalar evaluate(const Vector &point) const {
        Scalar total = 0;
        for (const auto &[e, c] : terms_) {
            Scalar t = c;
            for (std::size_t v = 0; v < e.size(); ++v)
                for (int k = 0; k < e[v]; ++k)
                    t *= point[v];
            total += t;
        }
        return total;
    }

    // drops every term involving a variable at index >= keep, then
    // forgets those variables
    Polynomial truncate_vars(std::size_t keep) const {
        Polynomial out(keep);
        for (const auto &[e, c] : terms_) {
            bool ok = true;
            for (std::size_t v = keep; v < e.size(); ++v)
                ok = ok && e[v] == 0;
            if (ok)
                out.terms_[Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(keep))] = c;
        }
        return out;
    }

    // substitute polynomials (all in the same ring) for every variable
    Polynomial compose(const std::vector<Polynomial> &subs) const {
        std::size_t n = subs.empty() ? 0 : subs.front().vars();
        Polynomial out(n);
        for (const auto &[e, c] : terms_) {
            Polynomial t = constant(n, c);
            for (std::size_t v = 0; v < e.size(); ++v)
                for (int k = 0; k < e[v]; ++k)
                    t = t * subs[v];
            out += t;
        }
        return out;
    }

  private:
    void accumulate(const Exponents &e, const Scalar &c) {
        if (mcx::is_zero(c))
            return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (mcx::is_zero(it->second))
                terms_.erase(it);
        }
    }

    std::size_t vars_;
    std::map<Exponents, Scalar> terms_;
};

inline int weighted_degree(const Exponents &e, const std::vector<int> &weights) {
    int d = 0;
    for (std::size_t v = 0; v < e.size(); ++v)
        d += e[v] * weights[v];
    return d;
}

inline std::string monomial_label(const Exponents &e) {
    std::string s;
    for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += "x" + std::to_string(v + 1);
        if (e[v] > 1)
            s += "^" + std::to_string(e[v]);
    }
    return s.empty() ? "1" : s;
}

} // namespace mcx
