#pragma once

// Curvature basis families gamma_n(s~) on the reduced abscissa s~ in [0,1],
// together with their closed-form primitives theta_n(s~) = int_0^s~ gamma_n.

#include "vic/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace vic {

__extension__ using Int128 = __int128;

enum class BasisFamily { LegendreShifted, Fourier };

/// Highest Legendre order whose integer coefficients are stored exactly.
inline constexpr int kMaxLegendreOrder = 30;

std::string to_string(BasisFamily family);
/// Parses "legendre" / "fourier" (case-insensitive); throws ConfigError.
BasisFamily parse_basis_family(std::string_view name);

/// Exact integer table P[n][k] = (-1)^(n+k) C(n,k) C(n+k,k), 0 <= n,k <= N.
/// Entries with k > n are zero. Throws OrderTooHigh for N > kMaxLegendreOrder.
std::vector<std::vector<Int128>> legendre_coeffs(int order);

template <typename Scalar>
class CurvatureBasis {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    CurvatureBasis(BasisFamily family, int order) : family_(family), order_(order) {
        if (order < 0) {
            throw BasisIndexError("basis order must be >= 0, got " + std::to_string(order));
        }
        if (family == BasisFamily::LegendreShifted) {
            exact_ = legendre_coeffs(order);
            gamma_coeffs_.resize(order + 1, order + 1);
            theta_coeffs_.resize(order + 1, order + 1);
            for (int n = 0; n <= order; ++n) {
                for (int k = 0; k <= order; ++k) {
                    const auto p = static_cast<Scalar>(static_cast<long double>(exact_[n][k]));
                    gamma_coeffs_(n, k) = p;
                    theta_coeffs_(n, k) = p / Scalar(k + 1);
                }
            }
        }
    }

    BasisFamily family() const { return family_; }
    int order() const { return order_; }
    int size() const { return order_ + 1; }

    /// Exact integer coefficients (LegendreShifted only; empty for Fourier).
    const std::vector<std::vector<Int128>>& exact_coeffs() const { return exact_; }
    /// Floating-point copy of P[n][k], row n holds the monomial coefficients of gamma_n.
    const Matrix& gamma_coeffs() const { return gamma_coeffs_; }
    const Matrix& theta_coeffs() const { return theta_coeffs_; }

private:
    BasisFamily family_;
    int order_;
    std::vector<std::vector<Int128>> exact_;
    Matrix gamma_coeffs_;
    Matrix theta_coeffs_;
};

namespace detail {

template <typename Scalar>
void check_basis_args(const CurvatureBasis<Scalar>& basis, int n, Scalar s) {
    if (n < 0 || n > basis.order()) {
        throw BasisIndexError("basis index " + std::to_string(n) + " outside [0, " +
                              std::to_string(basis.order()) + "]");
    }
    using std::isfinite;
    constexpr double slack = 1e-12;
    if (!isfinite(double(s)) || double(s) < -slack || double(s) > 1.0 + slack) {
        throw DomainError("reduced abscissa " + std::to_string(double(s)) + " outside [0, 1]");
    }
}

/// Horner evaluation of row n of a monomial table at s.
template <typename Scalar, typename Derived>
Scalar horner_row(const Eigen::MatrixBase<Derived>& table, int n, int degree, Scalar s) {
    Scalar acc(0);
    for (int k = degree; k >= 0; --k) acc = acc * s + table(n, k);
    return acc;
}

}  // namespace detail

template <typename Scalar>
Scalar eval_gamma(const CurvatureBasis<Scalar>& basis, int n, Scalar s) {
    detail::check_basis_args(basis, n, s);
    if (n == 0) return Scalar(1);
    if (basis.family() == BasisFamily::LegendreShifted) {
        return detail::horner_row(basis.gamma_coeffs(), n, n, s);
    }
    using std::cos;
    using std::sin;
    const int k = (n + 1) / 2;
    const Scalar arg = Scalar(2 * k) * std::numbers::pi_v<Scalar> * s;
    return (n % 2 == 1) ? cos(arg) : sin(arg);
}

template <typename Scalar>
Scalar eval_theta(const CurvatureBasis<Scalar>& basis, int n, Scalar s) {
    detail::check_basis_args(basis, n, s);
    if (n == 0) return s;
    if (basis.family() == BasisFamily::LegendreShifted) {
        return s * detail::horner_row(basis.theta_coeffs(), n, n, s);
    }
    using std::cos;
    using std::sin;
    const int k = (n + 1) / 2;
    const Scalar omega = Scalar(2 * k) * std::numbers::pi_v<Scalar>;
    return (n % 2 == 1) ? sin(omega * s) / omega : (Scalar(1) - cos(omega * s)) / omega;
}

/// All gamma_n(s) for n = 0..N.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gamma_row(const CurvatureBasis<Scalar>& basis, Scalar s) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(basis.size());
    for (int n = 0; n <= basis.order(); ++n) out(n) = eval_gamma(basis, n, s);
    return out;
}

/// All theta_n(s) for n = 0..N.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> theta_row(const CurvatureBasis<Scalar>& basis, Scalar s) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(basis.size());
    for (int n = 0; n <= basis.order(); ++n) out(n) = eval_theta(basis, n, s);
    return out;
}

using Basis = CurvatureBasis<double>;

}  // namespace vic
