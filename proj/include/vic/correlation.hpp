#pragma once

// Correlation functional Phi = sum (f - g)^2 dS over the virtual beam mesh and the
// Gauss-Newton iteration that minimizes it.

#include "vic/basis.hpp"
#include "vic/geometry.hpp"
#include "vic/image.hpp"
#include "vic/virtual_beam.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace vic {

struct FitOptions {
    int max_iters = 100;
    /// Stop when |Phi_prev - Phi| / Phi_first drops below this.
    double rel_tol = 1e-6;
    /// One flag per component of V (x0_1, x0_2, theta0, A_0..); empty = all free.
    std::vector<bool> frozen;
    bool backtracking = true;
    int max_halvings = 20;
    /// Largest accepted condition number of the normal matrix in dimensionless
    /// parameters (x0 / L, theta0, A L).
    double max_condition = 1e12;
};

enum class FitStatus { Converged, MaxIterations, IllConditioned, NoDescent, OutOfBounds, Overlap };
std::string to_string(FitStatus status);

struct FitReport {
    Shape params;
    std::vector<double> phi_history;  // Phi at p0, then after every accepted update
    std::vector<double> step_norms;   // |Delta V| of every accepted update
    int iterations = 0;
    bool converged = false;
    double condition_estimate = 0.0;
    FitStatus status = FitStatus::MaxIterations;
    std::string message;

    double final_phi() const { return phi_history.empty() ? 0.0 : phi_history.back(); }
};

/// Phi at p. Throws OutOfBounds when a mesh node leaves the image support and
/// OverlapError when |gamma| R >= 1 somewhere on the beam.
double phi(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam);

/// Transverse integrals phi_i = sum_j (f - g)^2 (1 - gamma r_j) w_r at each station s_i;
/// phi() equals the trapezoid sum of these over s.
struct PhiProfile {
    Eigen::VectorXd s;
    Eigen::VectorXd phi;
    Eigen::VectorXd s_weights;
};
PhiProfile phi_per_station(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam);

/// Gauss-Newton system restricted to the free components of V.
struct NormalSystem {
    Eigen::MatrixXd M;              // sum c_k c_p dS, c_k = l'(r) nu . dx/dV_k
    Eigen::VectorXd rhs;            // -1/2 dPhi/dV_k of the discrete functional
    std::vector<int> free_index;    // component of V for each row
    double phi = 0.0;
};

NormalSystem assemble(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam,
                      const std::vector<bool>& frozen = {});

/// Gradient dPhi/dV over all N+4 components, same conventions as assemble().
Eigen::VectorXd phi_gradient(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam);

struct Step {
    Eigen::VectorXd delta;
    double condition = 0.0;
};

/// Spectral condition number of diag(scale) M diag(scale); an empty scale means ones.
double scaled_condition(const Eigen::MatrixXd& M, const Eigen::VectorXd& scale = {});

/// Per-row scale that makes the free components dimensionless: L for x0, 1 for theta0,
/// 1 / L for the amplitudes.
Eigen::VectorXd dimensionless_scale(const std::vector<int>& free_index, double L);

/// Solves M delta = rhs with an LDL^T factorization of the equilibrated matrix. Throws
/// IllConditioned when scaled_condition(M, scale) exceeds max_condition.
Step step(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs, double max_condition = 1e12,
          const Eigen::VectorXd& scale = {}, int basis_order = -1);

/// Gauss-Newton iterations from p0. Never throws for numerical failures; the report
/// carries the status and the best parameters reached.
FitReport fit(const Raster& raster, const Shape& p0, const Basis& basis, const Beam& beam,
              const FitOptions& options = {});

/// Parses a freeze list such as {"x0_1", "A0"} into a mask of length dof.
std::vector<bool> freeze_mask(const std::vector<std::string>& names, int dof);

}  // namespace vic
