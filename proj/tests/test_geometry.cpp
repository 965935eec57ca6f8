#include "vic/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace vic;

namespace {

Shape make_shape(Eigen::VectorXd A, double L, double theta0 = 0.0, Eigen::Vector2d x0 = Eigen::Vector2d::Zero()) {
    Shape p;
    p.x0 = x0;
    p.theta0 = theta0;
    p.A = std::move(A);
    p.L = L;
    return p;
}

const Basis kLeg3(BasisFamily::LegendreShifted, 3);

}  // namespace

TEST(Curvature, Examples) {
    const Shape zero = make_shape(Eigen::VectorXd::Zero(4), 50.0, 0.3);
    const Shape arc = make_shape((Eigen::VectorXd(4) << 0.01, 0, 0, 0).finished(), 50.0);
    const Shape tilt = make_shape((Eigen::VectorXd(4) << 0, 0.02, 0, 0).finished(), 50.0);
    for (double s : {0.0, 12.5, 50.0}) {
        EXPECT_EQ(gamma_at(zero, kLeg3, s), 0.0);
        EXPECT_EQ(theta_at(zero, kLeg3, s), 0.3);
        EXPECT_NEAR(gamma_at(arc, kLeg3, s), 0.01, 1e-15);
        EXPECT_NEAR(theta_at(arc, kLeg3, s), 0.01 * s, 1e-14);
    }
    EXPECT_NEAR(gamma_at(tilt, kLeg3, 25.0), 0.0, 1e-15);
    EXPECT_THROW(gamma_at(arc, kLeg3, 50.5), DomainError);
    EXPECT_THROW(gamma_at(arc, Basis(BasisFamily::LegendreShifted, 2), 1.0), BasisIndexError);
}

TEST(Curvature, ThetaDerivativeIsGamma) {
    const Shape p = make_shape((Eigen::VectorXd(4) << 0.003, -0.002, 0.004, 0.001).finished(), 300.0, 0.2);
    const double s = p.L / 3.0, h = 1e-4;
    const double fd = (theta_at(p, kLeg3, s + h) - theta_at(p, kLeg3, s - h)) / (2 * h);
    EXPECT_NEAR(fd, gamma_at(p, kLeg3, s), 1e-6 * std::abs(gamma_at(p, kLeg3, s)));
}

TEST(CumulativeSimpson, ExactOnQuadratics) {
    for (int n : {2, 3, 8, 9}) {
        const double h = 0.25;
        Eigen::MatrixXd f(n, 1), exact(n, 1);
        for (int i = 0; i < n; ++i) {
            const double s = i * h;
            f(i, 0) = 1 + s - 2 * s * s;
            exact(i, 0) = s + s * s / 2 - 2 * s * s * s / 3;
        }
        EXPECT_LT((cumulative_simpson(f, h) - exact).cwiseAbs().maxCoeff(), n > 2 ? 1e-13 : 1e-2) << n;
    }
}

TEST(MeanLine, StraightAndCircle) {
    const Basis b0(BasisFamily::LegendreShifted, 0);
    const auto straight = mean_line(make_shape(Eigen::VectorXd::Zero(1), 100.0), b0, 11);
    EXPECT_NEAR((straight.back().x - Eigen::Vector2d(100, 0)).norm(), 0.0, 1e-12);

    const double kappa = 0.01, L = 150.0;
    const auto arc = mean_line(make_shape(Eigen::VectorXd::Constant(1, kappa), L), b0, 1001);
    const Eigen::Vector2d expected(std::sin(kappa * L) / kappa, (1 - std::cos(kappa * L)) / kappa);
    EXPECT_LT((arc.back().x - expected).norm(), 1e-6 * L);

    const double Lc = 2 * std::numbers::pi / kappa;
    const Eigen::Vector2d x0(5, 7);
    const auto circle = mean_line(make_shape(Eigen::VectorXd::Constant(1, kappa), Lc, 0.0, x0), b0, 1001);
    EXPECT_LT((circle.back().x - x0).norm(), 1e-6 * Lc);
}

TEST(MeanLine, FrameIsOrthonormal) {
    const Shape p = make_shape((Eigen::VectorXd(4) << 0.003, -0.002, 0.004, 0.001).finished(), 300.0, 0.7);
    for (const auto& f : mean_line(p, kLeg3, 57)) {
        EXPECT_NEAR(f.tau.norm(), 1.0, 1e-15);
        EXPECT_NEAR(f.tau.dot(f.nu), 0.0, 1e-15);
        EXPECT_NEAR(f.tau(0) * f.nu(1) - f.tau(1) * f.nu(0), 1.0, 1e-15);  // nu = tau rotated by +pi/2
    }
}

TEST(SurfacePoint, Examples) {
    Frame f{};
    f.x = {3, 4};
    f.nu = {0, 1};
    EXPECT_EQ(surface_point(f, 0.0), f.x);
    EXPECT_EQ(surface_point(f, 2.5), Eigen::Vector2d(3, 6.5));
    const double t = std::numbers::pi / 2;
    f.nu = {-std::sin(t), std::cos(t)};
    EXPECT_NEAR((surface_point(f, 1.0) - Eigen::Vector2d(2, 4)).norm(), 0.0, 1e-15);
}

TEST(Sensitivity, RigidFields) {
    const Basis b(BasisFamily::LegendreShifted, 2);
    const Shape straight = make_shape(Eigen::VectorXd::Zero(3), 40.0);
    const auto fields = sensitivity_fields(straight, b, 41);
    ASSERT_EQ(fields.size(), 6u);
    for (int i = 0; i < 41; ++i) {
        EXPECT_EQ(fields[1].row(i), Eigen::RowVector2d(0, 1));
        EXPECT_NEAR(fields[2](i, 0), 0.0, 1e-15);
        EXPECT_NEAR(fields[2](i, 1), double(i), 1e-12);
    }
    for (std::size_t k = 2; k < fields.size(); ++k) EXPECT_EQ(fields[k].row(0).norm(), 0.0);
}

TEST(Sensitivity, MatchesFiniteDifferences) {
    const Shape p = make_shape((Eigen::VectorXd(4) << 0.004, -0.003, 0.002, 0.001).finished(), 200.0, 0.3);
    const int n = 201;
    const auto fields = sensitivity_fields(p, kLeg3, n);
    for (int k = 0; k < p.dof(); ++k) {
        const double h = k < 2 ? 1e-3 : (k == 2 ? 1e-6 : 1e-6 / p.L);
        Eigen::VectorXd vp = p.as_vector(), vm = p.as_vector();
        vp(k) += h;
        vm(k) -= h;
        const auto kp = beam_kinematics(Shape::from_vector(vp, p.L), kLeg3, n, false);
        const auto km = beam_kinematics(Shape::from_vector(vm, p.L), kLeg3, n, false);
        const Eigen::MatrixX2d fd = (kp.x - km.x) / (2 * h);
        EXPECT_LT((fd - fields[k]).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, fields[k].cwiseAbs().maxCoeff()))
            << param_name(k);
    }
}

TEST(Overlap, Ratio) {
    const Basis b0(BasisFamily::LegendreShifted, 0);
    const auto k = beam_kinematics(make_shape(Eigen::VectorXd::Constant(1, 0.2), 10.0), b0, 11, false);
    EXPECT_NEAR(overlap_ratio(k, 4.0), 0.8, 1e-15);
    EXPECT_NO_THROW(check_no_overlap(k, 4.0));
    EXPECT_THROW(check_no_overlap(k, 5.0), OverlapError);
}

TEST(ShapeParams, VectorRoundTrip) {
    const Shape p = make_shape((Eigen::VectorXd(2) << 0.1, 0.2).finished(), 9.0, 0.5, {1, 2});
    const Eigen::VectorXd v = p.as_vector();
    EXPECT_EQ(v.size(), 5);
    const Shape q = Shape::from_vector(v, p.L);
    EXPECT_EQ(q.as_vector(), v);
    EXPECT_EQ(param_name(0), "x0_1");
    EXPECT_EQ(param_name(2), "theta0");
    EXPECT_EQ(param_name(4), "A1");
}
