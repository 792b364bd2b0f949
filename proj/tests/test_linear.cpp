#include "support.hpp"

#include <random>

using namespace mcx;
using namespace mcx::testing;

TEST(Scalar, ParsesAndFormatsLowestTerms) {
    EXPECT_EQ(format_scalar(parse_scalar("4/6")), "2/3");
    EXPECT_EQ(format_scalar(parse_scalar("-3/-1")), "3");
    EXPECT_EQ(format_scalar(parse_scalar("0/5")), "0");
    EXPECT_THROW(parse_scalar("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_scalar("x"), std::invalid_argument);
    EXPECT_THROW(parse_scalar(""), std::invalid_argument);
}

TEST(CanonicalBasis, ScalingInvariance) {
    Subspace s = canonical_basis(mat({{2, 0}, {0, 3}}));
    EXPECT_EQ(s.basis(), mat({{1, 0}, {0, 1}}));
}

TEST(CanonicalBasis, EmptyInput) {
    Subspace s = canonical_basis(Matrix(0, 4));
    EXPECT_EQ(s.dim(), 0u);
    EXPECT_EQ(s.ambient_dim(), 4u);
}

TEST(CanonicalBasis, DependentRows) {
    Subspace s = canonical_basis(mat({{1, 1}, {2, 2}}));
    EXPECT_EQ(s.dim(), 1u);
    EXPECT_EQ(s.basis(), mat({{1, 1}}));
}

TEST(KernelImage, ZeroAndIdentity) {
    EXPECT_EQ(kernel(Matrix(3, 3)).dim(), 3u);
    EXPECT_EQ(image(Matrix(3, 3)).dim(), 0u);
    EXPECT_EQ(kernel(Matrix::identity(4)).dim(), 0u);
    EXPECT_EQ(image(Matrix::identity(4)).dim(), 4u);
}

TEST(KernelImage, RankOneByHand) {
    Matrix m = mat({{1, 2}, {2, 4}});
    EXPECT_EQ(kernel(m), span({vec({2, -1})}, 2));
    EXPECT_EQ(image(m), span({vec({1, 2})}, 2));
}

TEST(SolveParticular, Identity) {
    Vector b = vec({3, -1, 7});
    EXPECT_EQ(*solve_particular(Matrix::identity(3), b), b);
}

TEST(SolveParticular, Inconsistent) {
    EXPECT_FALSE(solve_particular(mat({{1, 0}, {0, 0}}), vec({0, 1})).has_value());
}

TEST(SolveParticular, MinimumNorm) {
    auto x = solve_particular(mat({{1, 1}}), vec({2}), Subspace::full(2));
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, vec({1, 1}));
}

TEST(SolveParticular, RespectsConstraint) {
    // x + y + z = 3 with x inside span{(1,0,0),(0,1,0)}
    Subspace plane = span({vec({1, 0, 0}), vec({0, 1, 0})}, 3);
    auto x = solve_particular(mat({{1, 1, 1}}), vec({3}), plane);
    ASSERT_TRUE(x);
    EXPECT_TRUE(plane.contains(*x));
    Scalar half = Scalar(3, 2);
    EXPECT_EQ(*x, (Vector{half, half, 0}));
}

TEST(OrthogonalComplement, Examples) {
    EXPECT_EQ(orthogonal_complement(Subspace(3)), Subspace::full(3));
    EXPECT_EQ(orthogonal_complement(span({vec({1, 0})}, 2)), span({vec({0, 1})}, 2));
    EXPECT_EQ(orthogonal_complement(span({vec({1, 1, 0})}, 3)),
              span({vec({1, -1, 0}), vec({0, 0, 1})}, 3));
}

TEST(IntersectSum, Examples) {
    Subspace x = span({vec({1, 0})}, 2), y = span({vec({0, 1})}, 2);
    EXPECT_EQ(intersect(x, x), x);
    EXPECT_EQ(subspace_sum(x, x), x);
    EXPECT_EQ(intersect(x, y).dim(), 0u);
    EXPECT_EQ(subspace_sum(x, y), Subspace::full(2));
    Subspace a = span({vec({1, 1}), vec({1, 0})}, 2), b = span({vec({1, 1}), vec({0, 1})}, 2);
    EXPECT_EQ(intersect(a, b), Subspace::full(2));
    EXPECT_THROW(intersect(Subspace(2), Subspace(3)), std::invalid_argument);
}

TEST(Projector, Examples) {
    EXPECT_EQ(projector(Subspace::full(3)), Matrix::identity(3));
    EXPECT_EQ(projector(Subspace(3)), Matrix(3, 3));
    Scalar h(1, 2);
    Matrix expect = Matrix::from_rows({{h, h}, {h, h}});
    EXPECT_EQ(projector(span({vec({1, 1})}, 2)), expect);
}

namespace {

Matrix random_matrix(std::mt19937_64 &rng, std::size_t r, std::size_t c) {
    std::uniform_int_distribution<int> e(-3, 3), sparse(0, 2);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (sparse(rng))
                m(i, j) = e(rng);
    return m;
}

} // namespace

TEST(LinearProperties, RandomMatrices) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> size(0, 12);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix m = random_matrix(rng, size(rng), size(rng));
        Subspace ker = kernel(m), im = image(m);
        ASSERT_EQ(ker.dim() + im.dim(), m.cols());
        for (std::size_t i = 0; i < ker.dim(); ++i)
            ASSERT_TRUE(is_zero(m * ker.vector(i)));
        ASSERT_EQ(im, orthogonal_complement(kernel(m.transpose())));

        // canonical form ignores row order and scaling
        Matrix shuffled = m;
        for (std::size_t i = 0; i + 1 < shuffled.rows(); i += 2) {
            Vector a = shuffled.row(i), b = shuffled.row(i + 1);
            shuffled.set_row(i, Scalar(-2) * b);
            shuffled.set_row(i + 1, a);
        }
        ASSERT_EQ(canonical_basis(m), canonical_basis(shuffled));
        ASSERT_EQ(canonical_basis(canonical_basis(m).basis()), canonical_basis(m));

        Subspace s = image(m);
        Matrix p = projector(s);
        ASSERT_EQ(p * p, p);
        ASSERT_EQ(p.transpose(), p);
        for (std::size_t i = 0; i < s.dim(); ++i)
            ASSERT_EQ(p * s.vector(i), s.vector(i));
        Subspace perp = orthogonal_complement(s);
        for (std::size_t i = 0; i < perp.dim(); ++i)
            ASSERT_TRUE(is_zero(p * perp.vector(i)));

        // exact solve on a consistent right-hand side
        Vector x(m.cols());
        for (auto &v : x)
            v = std::uniform_int_distribution<int>(-4, 4)(rng);
        Vector b = m * x;
        auto sol = solve_particular(m, b);
        ASSERT_TRUE(sol);
        ASSERT_EQ(m * *sol, b);
        // minimum norm: orthogonal to the kernel
        for (std::size_t i = 0; i < ker.dim(); ++i)
            ASSERT_TRUE(is_zero(dot(*sol, ker.vector(i))));

        // dimension formula for intersect/sum
        Matrix m2 = random_matrix(rng, m.rows(), size(rng));
        Subspace t = image(m2);
        ASSERT_EQ(s.dim() + t.dim(), intersect(s, t).dim() + subspace_sum(s, t).dim());
    }
}

TEST(LinearProperties, PseudoInverse) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m = random_matrix(rng, 1 + trial % 7, 1 + trial % 5);
        Matrix p = pseudo_inverse(m);
        EXPECT_EQ(m * p * m, m);
        EXPECT_EQ(p * m * p, p);
        EXPECT_EQ((m * p).transpose(), m * p);
        EXPECT_EQ((p * m).transpose(), p * m);
    }
}

TEST(LinearProperties, InverseAndPreimage) {
    Matrix a = mat({{2, 1}, {1, 1}});
    EXPECT_EQ(a * inverse(a), Matrix::identity(2));
    Matrix m = mat({{1, 0, 0}, {0, 1, 0}});
    Subspace t = span({vec({1, 0})}, 2);
    EXPECT_EQ(preimage(m, t), span({vec({1, 0, 0}), vec({0, 0, 1})}, 3));
    EXPECT_EQ(map_subspace(m, Subspace::full(3)), Subspace::full(2));
}
