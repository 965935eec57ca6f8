#include "vic/beam_oracle.hpp"
#include "vic/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vic;

namespace {

double tip_deflection(const CantileverSpec& spec) {
    const auto shape = solve_elastica(spec);
    return shape.x2(shape.size() - 1);
}

}  // namespace

TEST(Elastica, BoundaryConditionsAreExact) {
    const auto shape = solve_elastica(CantileverSpec{});
    EXPECT_EQ(shape.theta(0), 0.0);
    EXPECT_EQ(shape.gamma(shape.size() - 1), 0.0);
    EXPECT_EQ(shape.x1(0), 0.0);
    EXPECT_EQ(shape.x2(0), 0.0);
    EXPECT_EQ(shape.s(shape.size() - 1), 2.459);
    EXPECT_GT(shape.x2(shape.size() - 1), 0.0);  // sags along gravity
}

TEST(Elastica, SmallLoadMatchesLinearTheory) {
    CantileverSpec spec;
    spec.density = 1e-3;
    const double q = spec.line_weight(), L = spec.length, EI = spec.flexural_rigidity();
    EXPECT_NEAR(tip_deflection(spec), q * std::pow(L, 4) / (8 * EI), 1e-3 * q * std::pow(L, 4) / (8 * EI));
}

TEST(Elastica, GridConvergence) {
    CantileverSpec spec;
    spec.n_nodes = 101;
    const double d1 = tip_deflection(spec);
    spec.n_nodes = 201;
    const double d2 = tip_deflection(spec);
    spec.n_nodes = 401;
    const double d3 = tip_deflection(spec);
    const double e12 = std::abs(d1 - d2), e23 = std::abs(d2 - d3);
    EXPECT_LT(e23, e12);
    EXPECT_NEAR(e12 / e23, 4.0, 0.5);  // second-order quadrature
}

TEST(Elastica, ArcLengthAndCurvatureShape) {
    const auto shape = solve_elastica(CantileverSpec{});
    double length = 0.0;
    for (Eigen::Index i = 1; i < shape.size(); ++i) {
        length += std::hypot(shape.x1(i) - shape.x1(i - 1), shape.x2(i) - shape.x2(i - 1));
    }
    EXPECT_NEAR(length, 2.459, 1e-6);
    for (Eigen::Index i = 1; i < shape.size(); ++i) EXPECT_LE(shape.gamma(i), shape.gamma(i - 1));
}

TEST(Elastica, ClampMomentBalance) {
    // EI gamma(0) equals the moment of the distributed weight about the clamp.
    const CantileverSpec spec;
    const auto shape = solve_elastica(spec);
    const Eigen::Index n = shape.size();
    const double ds = shape.s(1) - shape.s(0);
    double moment = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) moment += (i == 0 || i == n - 1 ? 0.5 : 1.0) * ds * shape.x1(i);
    moment *= spec.line_weight();
    EXPECT_NEAR(spec.flexural_rigidity() * shape.gamma(0), moment, 1e-6 * moment);
}

TEST(Rescale, Examples) {
    const auto shape = solve_elastica(CantileverSpec{});
    const auto same = rescale_to_pixels(shape, 1.0, Eigen::Vector2d::Zero());
    EXPECT_EQ(same.x1, shape.x1);
    EXPECT_EQ(same.x2, shape.x2);

    const double photo_scale = 3897.0 / 2.33;
    const auto px = rescale_to_pixels(shape, photo_scale, Eigen::Vector2d::Zero());
    EXPECT_NEAR(px.s(px.size() - 1), 4113.0, 1.0);

    const auto a = rescale_to_pixels(shape, 100.0, Eigen::Vector2d::Zero());
    const auto b = rescale_to_pixels(shape, 200.0, Eigen::Vector2d::Zero());
    EXPECT_LT((b.x1 - 2.0 * a.x1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((b.x2 - 2.0 * a.x2).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.gamma - shape.gamma / 100.0).cwiseAbs().maxCoeff(), 1e-15);

    const auto shifted = rescale_to_pixels(shape, 1.0, Eigen::Vector2d(3, 4));
    EXPECT_EQ(shifted.x1(0), 3.0);
    EXPECT_EQ(shifted.x2(0), 4.0);
}

TEST(CantileverSpec, Validation) {
    CantileverSpec spec;
    EXPECT_NEAR(spec.line_weight(), 2700 * 9.81 * std::numbers::pi * 4.95e-3 * 4.95e-3, 1e-12);
    spec.radius = -1.0;
    EXPECT_THROW(spec.validate(), ConfigError);
    spec = CantileverSpec{};
    spec.n_nodes = 2;
    EXPECT_THROW(solve_elastica(spec), ConfigError);
}
