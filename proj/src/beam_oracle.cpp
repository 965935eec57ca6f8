#include "vic/beam_oracle.hpp"

#include "vic/errors.hpp"

#include <cmath>
#include <numbers>

namespace vic {

double CantileverSpec::line_weight() const {
    return density * gravity * std::numbers::pi * radius * radius;
}

double CantileverSpec::flexural_rigidity() const {
    return young_modulus * std::numbers::pi * std::pow(radius, 4) / 4.0;
}

void CantileverSpec::validate() const {
    if (!(length > 0 && radius > 0 && young_modulus > 0 && density > 0 && gravity > 0)) {
        throw ConfigError("cantilever properties must all be positive");
    }
    if (n_nodes < 100) throw ConfigError("cantilever needs at least 100 nodes");
}

namespace {

// out(i) = int_0^{s_i} f, trapezoid rule.
Eigen::VectorXd cumulative_trapezoid(const Eigen::VectorXd& f, double h) {
    Eigen::VectorXd out(f.size());
    out(0) = 0.0;
    for (Eigen::Index i = 1; i < f.size(); ++i) out(i) = out(i - 1) + 0.5 * h * (f(i - 1) + f(i));
    return out;
}

// gamma(s) = q / EI * int_s^L (x1(xi) - x1(s)) dxi for the current angle field.
Eigen::VectorXd curvature_from_angles(const Eigen::VectorXd& theta, double h, double q_over_ei) {
    const Eigen::VectorXd x1 = cumulative_trapezoid(theta.array().cos().matrix(), h);
    const Eigen::VectorXd X1 = cumulative_trapezoid(x1, h);
    const Eigen::Index last = theta.size() - 1;
    const double L = h * static_cast<double>(last);
    Eigen::VectorXd gamma(theta.size());
    for (Eigen::Index i = 0; i <= last; ++i) {
        const double tail = X1(last) - X1(i);
        gamma(i) = q_over_ei * (tail - x1(i) * (L - h * static_cast<double>(i)));
    }
    gamma(last) = 0.0;  // no moment at the free end
    return gamma;
}

}  // namespace

CantileverShape solve_elastica(const CantileverSpec& spec) {
    spec.validate();
    const int n = spec.n_nodes;
    const double h = spec.length / (n - 1);
    const double q_over_ei = spec.line_weight() / spec.flexural_rigidity();
    constexpr double relaxation = 0.5;

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    CantileverShape out;
    bool converged = false;
    for (int it = 1; it <= kOracleMaxIterations; ++it) {
        const Eigen::VectorXd gamma = curvature_from_angles(theta, h, q_over_ei);
        const Eigen::VectorXd updated = cumulative_trapezoid(gamma, h);
        if (!updated.allFinite()) break;
        const double change = (updated - theta).cwiseAbs().maxCoeff();
        theta = (1.0 - relaxation) * theta + relaxation * updated;
        out.iterations = it;
        if (change < kOracleTolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw OracleDivergence("elastica fixed point did not converge in " + std::to_string(kOracleMaxIterations) +
                               " iterations; deflection too large for this scheme");
    }

    out.s.resize(n);
    for (int i = 0; i < n; ++i) out.s(i) = h * i;
    out.s(n - 1) = spec.length;
    theta(0) = 0.0;
    out.theta = theta;
    out.gamma = curvature_from_angles(theta, h, q_over_ei);
    out.x1 = cumulative_trapezoid(theta.array().cos().matrix(), h);
    out.x2 = cumulative_trapezoid(theta.array().sin().matrix(), h);
    return out;
}

CantileverShape rescale_to_pixels(const CantileverShape& shape, double px_per_meter, const Eigen::Vector2d& origin) {
    if (!(px_per_meter > 0.0)) throw ConfigError("px_per_meter must be positive");
    CantileverShape out = shape;
    out.s = shape.s * px_per_meter;
    out.x1 = (shape.x1 * px_per_meter).array() + origin(0);
    out.x2 = (shape.x2 * px_per_meter).array() + origin(1);
    out.gamma = shape.gamma / px_per_meter;
    return out;
}

}  // namespace vic
