#pragma once

// Large-deflection equilibrium of a heavy cantilever (elastica under its own weight),
// used as an independent reference for fitted mean lines.

#include <Eigen/Core>

namespace vic {

struct CantileverSpec {
    double length = 2.459;          // m
    double radius = 4.95e-3;        // m
    double young_modulus = 72e9;    // Pa
    double density = 2700.0;        // kg/m^3
    double gravity = 9.81;          // m/s^2
    int n_nodes = 4001;

    double line_weight() const;      // q = rho g pi r^2, N/m
    double flexural_rigidity() const;  // E pi r^4 / 4, N m^2
    void validate() const;
};

/// Columns s, x1, x2, theta, gamma; one row per node. x2 points along gravity,
/// which matches the downward image row axis after rescaling.
struct CantileverShape {
    Eigen::VectorXd s, x1, x2, theta, gamma;
    int iterations = 0;

    Eigen::Index size() const { return s.size(); }
};

inline constexpr double kOracleTolerance = 1e-10;
inline constexpr int kOracleMaxIterations = 10000;

/// Under-relaxed fixed point on theta with trapezoid quadrature. Throws
/// OracleDivergence if it does not settle within kOracleMaxIterations.
CantileverShape solve_elastica(const CantileverSpec& spec);

/// Maps a solved shape into image pixels: X = origin + px_per_meter * x,
/// s scaled alike and curvature divided by px_per_meter.
CantileverShape rescale_to_pixels(const CantileverShape& shape, double px_per_meter, const Eigen::Vector2d& origin);

}  // namespace vic
