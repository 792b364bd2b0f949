#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcx {

using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

inline Scalar parse_scalar(const std::string &text) {
    Scalar q;
    if (text.empty() || q.set_str(text, 10) != 0)
        throw std::invalid_argument("not a rational: '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

// "p/q", or "p" when q = 1
inline std::string format_scalar(const Scalar &q) { return q.get_str(); }

inline bool is_zero(const Scalar &q) { return sgn(q) == 0; }

inline bool is_zero(const Vector &v) {
    for (const auto &x : v)
        if (!is_zero(x))
            return false;
    return true;
}

inline Scalar dot(const Vector &u, const Vector &v) {
    Scalar s = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!is_zero(u[i]) && !is_zero(v[i]))
            s += u[i] * v[i];
    return s;
}

inline Vector operator+(Vector u, const Vector &v) {
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] += v[i];
    return u;
}

inline Vector operator-(Vector u, const Vector &v) {
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] -= v[i];
    return u;
}

inline Vector operator*(const Scalar &c, Vector v) {
    for (auto &x : v)
        x *= c;
    return v;
}

// Dense row-major matrix of exact rationals. Products skip zero entries,
// which keeps the mostly sparse operators of a multicomplex cheap.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<Vector> &rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }
    // width taken from the first row
    static Matrix from_rows(const std::vector<Vector> &rows) {
        return from_rows(rows, rows.empty() ? 0 : rows.front().size());
    }

    static Matrix from_columns(const std::vector<Vector> &cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows)
                throw std::invalid_argument("ragged columns");
            for (std::size_t i = 0; i < rows; ++i)
                m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar &operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    Vector row(std::size_t i) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    Vector col(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    void set_row(std::size_t i, const Vector &v) {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = v[j];
    }

    void set_col(std::size_t j, const Vector &v) {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = v[i];
    }

    bool is_zero() const {
        for (const auto &x : data_)
            if (!mcx::is_zero(x))
                return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!mcx::is_zero((*this)(i, j)))
                    t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
        Matrix b(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix &b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    void add_block(std::size_t r0, std::size_t c0, const Matrix &b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!mcx::is_zero(b(i, j)))
                    (*this)(r0 + i, c0 + j) += b(i, j);
    }

    Matrix &operator+=(const Matrix &o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            if (!mcx::is_zero(o.data_[k]))
                data_[k] += o.data_[k];
        return *this;
    }

    Matrix &operator-=(const Matrix &o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            if (!mcx::is_zero(o.data_[k]))
                data_[k] -= o.data_[k];
        return *this;
    }

    Matrix &operator*=(const Scalar &c) {
        for (auto &x : data_)
            if (!mcx::is_zero(x))
                x *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator-(Matrix a) { return a *= Scalar(-1); }
    friend Matrix operator*(const Scalar &c, Matrix a) { return a *= c; }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        Scalar t;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar &aik = a(i, k);
                if (mcx::is_zero(aik))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Scalar &bkj = b(k, j);
                    if (mcx::is_zero(bkj))
                        continue;
                    t = aik * bkj;
                    c(i, j) += t;
                }
            }
        return c;
    }

    friend Vector operator*(const Matrix &a, const Vector &v) {
        if (a.cols_ != v.size())
            throw std::invalid_argument("matrix-vector shape mismatch");
        Vector out(a.rows_);
        for (std::size_t j = 0; j < a.cols_; ++j) {
            if (mcx::is_zero(v[j]))
                continue;
            for (std::size_t i = 0; i < a.rows_; ++i)
                if (!mcx::is_zero(a(i, j)))
                    out[i] += a(i, j) * v[j];
        }
        return out;
    }

    friend bool operator==(const Matrix &a, const Matrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    void check_same_shape(const Matrix &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline Matrix vstack(const Matrix &top, const Matrix &bottom) {
    if (top.cols() != bottom.cols())
        throw std::invalid_argument("vstack column mismatch");
    Matrix m(top.rows() + bottom.rows(), top.cols());
    m.set_block(0, 0, top);
    m.set_block(top.rows(), 0, bottom);
    return m;
}

inline Matrix hstack(const Matrix &left, const Matrix &right) {
    if (left.rows() != right.rows())
        throw std::invalid_argument("hstack row mismatch");
    Matrix m(left.rows(), left.cols() + right.cols());
    m.set_block(0, 0, left);
    m.set_block(0, left.cols(), right);
    return m;
}

// Reduces m to reduced row-echelon form in place and returns the pivot
// columns. Rows past the rank end up zero.
inline std::vector<std::size_t> rref(Matrix &m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    Scalar t;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && is_zero(m(sel, col)))
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(sel, j), m(row, j));
        Scalar inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j)
            if (!is_zero(m(row, j)))
                m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col)))
                continue;
            Scalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                if (is_zero(m(row, j)))
                    continue;
                t = f * m(row, j);
                m(i, j) -= t;
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

// A subspace of Q^n held by its reduced row-echelon basis, so equal
// subspaces have identical representations.
class Subspace {
  public:
    explicit Subspace(std::size_t ambient = 0) : basis_(0, ambient) {}

    static Subspace full(std::size_t n);

    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix &basis() const { return basis_; }
    const std::vector<std::size_t> &pivots() const { return pivots_; }
    Vector vector(std::size_t i) const { return basis_.row(i); }

    // basis vectors as columns, ambient × dim
    Matrix columns() const { return basis_.transpose(); }

    // coordinates of a member with respect to the canonical basis
    Vector coordinates(const Vector &v) const {
        Vector c(pivots_.size());
        for (std::size_t i = 0; i < pivots_.size(); ++i)
            c[i] = v[pivots_[i]];
        return c;
    }

    Vector embed(const Vector &coords) const {
        Vector v(ambient_dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (mcx::is_zero(coords[i]))
                continue;
            for (std::size_t j = 0; j < ambient_dim(); ++j)
                if (!mcx::is_zero(basis_(i, j)))
                    v[j] += coords[i] * basis_(i, j);
        }
        return v;
    }

    bool contains(const Vector &v) const {
        if (v.size() != ambient_dim())
            throw std::invalid_argument("ambient mismatch");
        return mcx::is_zero(v - embed(coordinates(v)));
    }

    bool contains(const Subspace &s) const {
        for (std::size_t i = 0; i < s.dim(); ++i)
            if (!contains(s.vector(i)))
                return false;
        return true;
    }

    bool is_zero() const { return dim() == 0; }

    friend bool operator==(const Subspace &a, const Subspace &b) {
        return a.basis_ == b.basis_;
    }

  private:
    friend Subspace canonical_basis(Matrix vectors);
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

// Row space of `vectors` in canonical form.
inline Subspace canonical_basis(Matrix vectors) {
    auto pivots = rref(vectors);
    Subspace s;
    s.basis_ = vectors.block(0, 0, pivots.size(), vectors.cols());
    s.pivots_ = std::move(pivots);
    return s;
}

inline Subspace Subspace::full(std::size_t n) { return canonical_basis(Matrix::identity(n)); }

inline Subspace span(const std::vector<Vector> &vectors, std::size_t ambient) {
    return canonical_basis(Matrix::from_rows(vectors, ambient));
}

inline Subspace kernel(Matrix m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<Vector> vs;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        Vector v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (!is_zero(m(r, f)))
                v[pivots[r]] = -m(r, f);
        vs.push_back(std::move(v));
    }
    return span(vs, m.cols());
}

// column space
inline Subspace image(const Matrix &m) { return canonical_basis(m.transpose()); }

inline Subspace orthogonal_complement(const Subspace &s) {
    Matrix b = s.basis();
    return kernel(std::move(b));
}

inline void require_same_ambient(const Subspace &a, const Subspace &b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("subspaces live in different ambient spaces");
}

inline Subspace subspace_sum(const Subspace &a, const Subspace &b) {
    require_same_ambient(a, b);
    return canonical_basis(vstack(a.basis(), b.basis()));
}

inline Subspace intersect(const Subspace &a, const Subspace &b) {
    require_same_ambient(a, b);
    if (a.dim() == 0 || b.dim() == 0)
        return Subspace(a.ambient_dim());
    return kernel(vstack(orthogonal_complement(a).basis(), orthogonal_complement(b).basis()));
}

// image of a subspace under a linear map
inline Subspace map_subspace(const Matrix &m, const Subspace &s) {
    if (s.dim() == 0)
        return Subspace(m.rows());
    return image(m * s.columns());
}

// preimage of a subspace under a linear map
inline Subspace preimage(const Matrix &m, const Subspace &target) {
    return kernel(orthogonal_complement(target).basis() * m);
}

// Inverse of a square invertible matrix.
inline Matrix inverse(const Matrix &m) {
    const std::size_t n = m.rows();
    if (m.cols() != n)
        throw std::invalid_argument("inverse of a non-square matrix");
    Matrix aug = hstack(m, Matrix::identity(n));
    auto pivots = rref(aug);
    if (pivots.size() != n || (n > 0 && pivots.back() != n - 1))
        throw std::domain_error("matrix is singular");
    return aug.block(0, n, n, n);
}

inline Matrix projector(const Subspace &s) {
    const std::size_t n = s.ambient_dim();
    if (s.dim() == 0)
        return Matrix(n, n);
    const Matrix &b = s.basis();
    Matrix bt = b.transpose();
    return bt * inverse(b * bt) * b;
}

// Moore-Penrose pseudo-inverse from the full-rank factorization m = F G,
// F the pivot columns of m and G the nonzero rows of rref(m).
inline Matrix pseudo_inverse(const Matrix &m) {
    Matrix r = m;
    auto pivots = rref(r);
    if (pivots.empty())
        return Matrix(m.cols(), m.rows());
    Matrix g = r.block(0, 0, pivots.size(), m.cols());
    Matrix f(m.rows(), pivots.size());
    for (std::size_t k = 0; k < pivots.size(); ++k)
        f.set_col(k, m.col(pivots[k]));
    Matrix gt = g.transpose();
    Matrix ft = f.transpose();
    return gt * inverse(g * gt) * inverse(ft * f) * ft;
}

// Minimum-norm x with m x = b, optionally restricted to a subspace of the
// domain. Empty when the system has no solution.
inline std::optional<Vector> solve_particular(const Matrix &m, const Vector &b,
                                              const std::optional<Subspace> &constraint = {}) {
    if (b.size() != m.rows())
        throw std::invalid_argument("right-hand side has the wrong length");
    Matrix basis = constraint ? constraint->columns() : Matrix::identity(m.cols());
    if (constraint && constraint->ambient_dim() != m.cols())
        throw std::invalid_argument("constraint lives in the wrong space");
    Matrix reduced = m * basis;
    Matrix aug(reduced.rows(), reduced.cols() + 1);
    aug.set_block(0, 0, reduced);
    for (std::size_t i = 0; i < b.size(); ++i)
        aug(i, reduced.cols()) = b[i];
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == reduced.cols())
        return std::nullopt;
    Vector y(reduced.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        y[pivots[r]] = aug(r, reduced.cols());
    Vector x = basis * y;
    Subspace homogeneous = map_subspace(basis, kernel(reduced));
    if (homogeneous.dim() > 0)
        x = x - projector(homogeneous) * x;
    return x;
}

} // namespace mcx
