#pragma once

// Mean-line geometry of the virtual beam: curvature series -> angle -> position,
// plus the unitary displacement fields dx/dV_k used by the Gauss-Newton system.
//
// Frame convention: x1 is the image column (rightward), x2 the image row
// (downward); theta is measured from +x1 toward +x2 and nu = tau rotated by +pi/2.

#include "vic/basis.hpp"
#include "vic/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace vic {

/// Shape vector V = {x0_1, x0_2, theta0, A_0..A_N} plus the fixed length L.
template <typename Scalar>
struct ShapeParams {
    using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector2 x0 = Vector2::Zero();  // px
    Scalar theta0 = Scalar(0);     // rad
    Vector A;                      // px^-1
    Scalar L = Scalar(1);          // px

    int order() const { return static_cast<int>(A.size()) - 1; }
    int dof() const { return static_cast<int>(A.size()) + 3; }

    Vector as_vector() const {
        Vector v(dof());
        v << x0, theta0, A;
        return v;
    }

    static ShapeParams from_vector(const Vector& v, Scalar length) {
        ShapeParams p;
        p.x0 = v.template head<2>();
        p.theta0 = v(2);
        p.A = v.tail(v.size() - 3);
        p.L = length;
        return p;
    }
};

/// Name of component k of V: x0_1, x0_2, theta0, A0, A1, ...
inline std::string param_name(int k) {
    if (k == 0) return "x0_1";
    if (k == 1) return "x0_2";
    if (k == 2) return "theta0";
    return "A" + std::to_string(k - 3);
}

template <typename Scalar>
struct FrameSample {
    using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
    Scalar s;
    Vector2 x;
    Scalar theta;
    Scalar gamma;
    Vector2 tau;
    Vector2 nu;
};

namespace detail {

template <typename Scalar>
void check_params(const ShapeParams<Scalar>& p, const CurvatureBasis<Scalar>& b) {
    if (!(p.L > Scalar(0))) throw DomainError("beam length must be positive");
    if (p.A.size() != b.size()) {
        throw BasisIndexError("shape has " + std::to_string(p.A.size()) +
                              " amplitudes but basis order " + std::to_string(b.order()) +
                              " needs " + std::to_string(b.size()));
    }
}

template <typename Scalar>
Scalar reduced_abscissa(const ShapeParams<Scalar>& p, Scalar s) {
    const double slack = 1e-9 * double(p.L);
    if (!(double(s) >= -slack && double(s) <= double(p.L) + slack)) {
        throw DomainError("abscissa " + std::to_string(double(s)) + " outside [0, " +
                          std::to_string(double(p.L)) + "]");
    }
    return std::clamp(s / p.L, Scalar(0), Scalar(1));
}

}  // namespace detail

template <typename Scalar>
Scalar gamma_at(const ShapeParams<Scalar>& p, const CurvatureBasis<Scalar>& b, Scalar s) {
    detail::check_params(p, b);
    return p.A.dot(gamma_row(b, detail::reduced_abscissa(p, s)));
}

template <typename Scalar>
Scalar theta_at(const ShapeParams<Scalar>& p, const CurvatureBasis<Scalar>& b, Scalar s) {
    detail::check_params(p, b);
    return p.theta0 + p.L * p.A.dot(theta_row(b, detail::reduced_abscissa(p, s)));
}

/// Row i of the result is int_0^{s_i} f over a uniform grid of spacing h.
/// Composite Simpson on even panels; odd end points add a three-point
/// half-panel rule so every node stays fourth-order accurate.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>
cumulative_simpson(const Eigen::MatrixBase<Derived>& f, typename Derived::Scalar h) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = f.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out(n, f.cols());
    if (n == 0) return out;
    out.row(0).setZero();
    if (n == 2) {
        out.row(1) = h / Scalar(2) * (f.row(0) + f.row(1));
        return out;
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            out.row(i) = out.row(i - 2) +
                         h / Scalar(3) * (f.row(i - 2) + Scalar(4) * f.row(i - 1) + f.row(i));
        } else if (i + 1 < n) {
            out.row(i) = out.row(i - 1) +
                         h / Scalar(12) * (Scalar(5) * f.row(i - 1) + Scalar(8) * f.row(i) - f.row(i + 1));
        } else {
            out.row(i) = out.row(i - 1) +
                         h / Scalar(12) * (-f.row(i - 2) + Scalar(8) * f.row(i - 1) + Scalar(5) * f.row(i));
        }
    }
    return out;
}

/// Everything the correlation needs about the beam on a uniform s-grid.
template <typename Scalar>
struct BeamKinematics {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

    Scalar ds = Scalar(0);
    Vector s, theta, gamma;
    Field x, tau, nu;
    // Filled when sensitivities are requested; one column / field per V_k.
    Matrix dtheta;               // n x (N+4)
    Matrix dgamma;               // n x (N+4)
    std::vector<Field> dx;       // N+4 fields of n x 2

    Eigen::Index samples() const { return s.size(); }
};

template <typename Scalar>
BeamKinematics<Scalar> beam_kinematics(const ShapeParams<Scalar>& p, const CurvatureBasis<Scalar>& b,
                                       int n_samples, bool with_sensitivities) {
    detail::check_params(p, b);
    if (n_samples < 2) throw DomainError("mean line needs at least 2 samples");
    using std::cos;
    using std::sin;

    BeamKinematics<Scalar> k;
    const int n = n_samples;
    const int nb = b.size();
    const int dof = nb + 3;
    k.ds = p.L / Scalar(n - 1);
    k.s.resize(n);
    k.theta.resize(n);
    k.gamma.resize(n);
    k.tau.resize(n, 2);
    k.nu.resize(n, 2);

    // Basis tables on the grid, rows = samples.
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gtab(n, nb), ttab(n, nb);
    for (int i = 0; i < n; ++i) {
        const Scalar sr = (i == n - 1) ? Scalar(1) : Scalar(i) / Scalar(n - 1);
        k.s(i) = sr * p.L;
        gtab.row(i) = gamma_row(b, sr).transpose();
        ttab.row(i) = theta_row(b, sr).transpose();
    }
    k.gamma = gtab * p.A;
    k.theta = (ttab * p.A) * p.L;
    k.theta.array() += p.theta0;
    for (int i = 0; i < n; ++i) {
        const Scalar c = cos(k.theta(i));
        const Scalar sn = sin(k.theta(i));
        k.tau(i, 0) = c;
        k.tau(i, 1) = sn;
        k.nu(i, 0) = -sn;
        k.nu(i, 1) = c;
    }
    k.x = cumulative_simpson(k.tau, k.ds);
    k.x.col(0).array() += p.x0(0);
    k.x.col(1).array() += p.x0(1);

    if (with_sensitivities) {
        k.dtheta.setZero(n, dof);
        k.dgamma.setZero(n, dof);
        k.dtheta.col(2).setOnes();
        k.dtheta.rightCols(nb) = ttab * p.L;
        k.dgamma.rightCols(nb) = gtab;
        k.dx.assign(dof, BeamKinematics<Scalar>::Field::Zero(n, 2));
        k.dx[0].col(0).setOnes();
        k.dx[1].col(1).setOnes();
        // dx/dV_k = int_0^s nu * dtheta/dV_k
        for (int c = 2; c < dof; ++c) {
            typename BeamKinematics<Scalar>::Field integrand(n, 2);
            integrand.col(0) = k.nu.col(0).cwiseProduct(k.dtheta.col(c));
            integrand.col(1) = k.nu.col(1).cwiseProduct(k.dtheta.col(c));
            k.dx[c] = cumulative_simpson(integrand, k.ds);
        }
    }
    return k;
}

template <typename Scalar>
std::vector<FrameSample<Scalar>> mean_line(const ShapeParams<Scalar>& p, const CurvatureBasis<Scalar>& b,
                                           int n_samples) {
    const auto k = beam_kinematics(p, b, n_samples, false);
    std::vector<FrameSample<Scalar>> out(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        out[i] = {k.s(i), k.x.row(i).transpose(), k.theta(i), k.gamma(i),
                  k.tau.row(i).transpose(), k.nu.row(i).transpose()};
    }
    return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> surface_point(const FrameSample<Scalar>& frame, Scalar r) {
    return frame.x + r * frame.nu;
}

/// dx/dV_k on a uniform grid of n_samples points, one n x 2 field per V_k.
/// The tau-collinear part of dX/dV_k is not included (it is orthogonal to grad g).
template <typename Scalar>
std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 2>> sensitivity_fields(const ShapeParams<Scalar>& p,
                                                                         const CurvatureBasis<Scalar>& b,
                                                                         int n_samples) {
    return beam_kinematics(p, b, n_samples, true).dx;
}

/// Largest |gamma| * half_width over a grid; must stay below 1.
template <typename Scalar>
Scalar overlap_ratio(const BeamKinematics<Scalar>& k, Scalar half_width) {
    return k.gamma.cwiseAbs().maxCoeff() * half_width;
}

template <typename Scalar>
void check_no_overlap(const BeamKinematics<Scalar>& k, Scalar half_width) {
    const Scalar ratio = overlap_ratio(k, half_width);
    if (!(ratio < Scalar(1))) {
        throw OverlapError("max |gamma| R = " + std::to_string(double(ratio)) +
                           " >= 1: the virtual beam folds over itself");
    }
}

using Shape = ShapeParams<double>;
using Frame = FrameSample<double>;
using Kinematics = BeamKinematics<double>;

}  // namespace vic
