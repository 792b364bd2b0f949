#include "support.hpp"

using namespace mcx;
using namespace mcx::testing;

namespace {

// column of ⋆ for the form (coef, cov) at bd
Vector star_of(const MulticomplexData &mc, const StarKit &star, Bidegree bd, std::size_t coef,
               const std::vector<int> &cov) {
    const auto &forms = mc.exterior->forms.at(bd);
    for (std::size_t i = 0; i < forms.size(); ++i)
        if (forms[i].coef == coef && forms[i].covectors == cov) {
            Vector e(forms.size());
            e[i] = 1;
            return star.at(bd, mc.dim(star.dual(bd))) * e;
        }
    ADD_FAILURE() << "form not found";
    return {};
}

Vector form_vector(const MulticomplexData &mc, Bidegree bd, std::size_t coef, const std::vector<int> &cov) {
    const auto &forms = mc.exterior->forms.at(bd);
    Vector e(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i)
        if (forms[i].coef == coef && forms[i].covectors == cov)
            e[i] = 1;
    return e;
}

} // namespace

TEST(Star, RequiresExteriorStructure) {
    EXPECT_THROW(build_star(single_d1()), std::invalid_argument);
}

TEST(Star, OneGoesToVolume) {
    MulticomplexData mc = engel(2);
    StarKit star = build_star(mc);
    EXPECT_EQ(star.top, Bidegree::at(7, 4));
    Vector v = star_of(mc, star, {0, 0}, 0, {});
    EXPECT_EQ(v, form_vector(mc, star.top, 0, {0, 1, 2, 3}));
}

TEST(Star, ThetaOneGoesToWeightSix) {
    MulticomplexData mc = engel(2);
    StarKit star = build_star(mc);
    Bidegree bd = Bidegree::at(1, 1);
    EXPECT_EQ(star.dual(bd), Bidegree::at(6, 3));
    Vector v = star_of(mc, star, bd, 0, {0});
    Vector e = form_vector(mc, Bidegree::at(6, 3), 0, {1, 2, 3});
    EXPECT_TRUE(v == e || v == Scalar(-1) * e);
}

TEST(Star, SelfDualEngelFullCheck) {
    Pipeline pl(engel(3, true));
    StarKit star = build_star(pl.mc);
    auto rep = check_star_duality(star, pl.mc, pl.kit, pl.rum, pl.eng, 3);
    EXPECT_TRUE(rep.star_square);
    EXPECT_TRUE(rep.isometry);
    EXPECT_TRUE(rep.delta0_consistent);
    EXPECT_TRUE(rep.e0_closed);
    for (const auto &[i, ok] : rep.delta_matches)
        EXPECT_TRUE(ok) << "δ_" << i;
    for (const auto &[i, ok] : rep.delta_c_matches)
        EXPECT_TRUE(ok) << "δ_c^" << i;
    EXPECT_EQ(rep.delta_matches.size(), 4u);
    EXPECT_EQ(rep.delta_c_matches.size(), 3u);
    EXPECT_TRUE(rep.mismatches.empty()) << rep.mismatches.front();
    EXPECT_GT(rep.stations_checked, 0u);
}

TEST(Star, SelfDualEngelStationExample) {
    Pipeline pl(engel(3, true));
    StarKit star = build_star(pl.mc);
    Bidegree bd = Bidegree::at(1, 1);
    Subspace img = map_subspace(star.at(bd, pl.mc.dim(star.dual(bd))), pl.eng.e(3, 1, 1, 1));
    EXPECT_EQ(img, pl.eng.e(1, 3, 6, 3));
    EXPECT_GT(img.dim(), 0u);
}

TEST(Star, PlainModelOnlyMatchesD0) {
    // polynomial coefficients alone are not closed under the adjoint of X_j
    Pipeline pl(engel(3));
    StarKit star = build_star(pl.mc);
    auto rep = check_star_duality(star, pl.mc, pl.kit, pl.rum, pl.eng, 1);
    EXPECT_TRUE(rep.star_square);
    EXPECT_TRUE(rep.isometry);
    EXPECT_TRUE(rep.delta_matches.at(0));
    EXPECT_FALSE(rep.delta_matches.at(1));
    EXPECT_FALSE(rep.ok());
}

TEST(Star, AdjointSign) {
    // δ = (-1)^{n(k+1)+1} ⋆ d ⋆ on k-forms
    EXPECT_EQ(adjoint_sign(4, 1), -1);
    EXPECT_EQ(adjoint_sign(4, 2), -1);
    EXPECT_EQ(adjoint_sign(3, 1), -1);
    EXPECT_EQ(adjoint_sign(3, 2), 1);
}
