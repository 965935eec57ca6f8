#pragma once

// Virtual image g(s, r) = l(r) and its quadrature mesh over (s, r).

#include "vic/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vic {

/// l(r) = (1 + cos(pi r / R)) / 2 on |r| <= R.
template <typename Scalar>
Scalar luminance(Scalar r, Scalar half_width) {
    using std::abs;
    using std::cos;
    if (!(abs(r) <= half_width * Scalar(1 + 1e-12))) {
        throw DomainError("r = " + std::to_string(double(r)) + " outside the virtual beam");
    }
    return (Scalar(1) + cos(std::numbers::pi_v<Scalar> * r / half_width)) / Scalar(2);
}

/// l'(r) = -(pi / 2R) sin(pi r / R).
template <typename Scalar>
Scalar luminance_slope(Scalar r, Scalar half_width) {
    using std::abs;
    using std::sin;
    if (!(abs(r) <= half_width * Scalar(1 + 1e-12))) {
        throw DomainError("r = " + std::to_string(double(r)) + " outside the virtual beam");
    }
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return -pi / (Scalar(2) * half_width) * sin(pi * r / half_width);
}

inline constexpr double kDefaultRefine = 3.0;
inline constexpr double kMaxMeshNodes = 1e8;

template <typename Scalar>
struct VirtualBeam {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Scalar R = Scalar(1);
    int n_r = 3;  // odd, so r = 0 is a mesh line
    int n_s = 2;

    Scalar dr() const { return Scalar(2) * R / Scalar(n_r - 1); }
    Scalar ds(Scalar L) const { return L / Scalar(n_s - 1); }

    Vector r_nodes() const {
        Vector r(n_r);
        const int mid = (n_r - 1) / 2;
        for (int j = 0; j < n_r; ++j) r(j) = Scalar(j - mid) * dr();
        r(0) = -R;
        r(n_r - 1) = R;
        return r;
    }

    /// Trapezoid weights along r (boundary nodes at half weight).
    Vector r_weights() const { return trapezoid_weights(n_r, dr()); }
    Vector s_weights(Scalar L) const { return trapezoid_weights(n_s, ds(L)); }

    static Vector trapezoid_weights(int n, Scalar h) {
        Vector w = Vector::Constant(n, h);
        w(0) = w(n - 1) = h / Scalar(2);
        return w;
    }
};

/// n_r = smallest odd integer >= 2 R refine + 1, n_s = ceil(L refine) + 1.
template <typename Scalar>
VirtualBeam<Scalar> build_mesh(Scalar L, Scalar R, Scalar refine = Scalar(kDefaultRefine)) {
    if (!(L > Scalar(0)) || !(R > Scalar(0))) throw DomainError("mesh needs L > 0 and R > 0");
    if (!(refine >= Scalar(1))) throw DomainError("mesh refinement must be >= 1 point per pixel");
    using std::ceil;
    const double eps = 1e-9;
    const double nr_min = double(2 * R * refine) + 1.0;
    const double ns_min = double(L * refine);
    if (nr_min * (ns_min + 1.0) > kMaxMeshNodes) {
        throw MeshTooLarge("virtual beam mesh would exceed 1e8 nodes");
    }
    VirtualBeam<Scalar> beam;
    beam.R = R;
    beam.n_r = static_cast<int>(std::ceil(nr_min - eps));
    if (beam.n_r % 2 == 0) ++beam.n_r;
    beam.n_r = std::max(beam.n_r, 3);
    beam.n_s = static_cast<int>(std::ceil(ns_min - eps)) + 1;
    beam.n_s = std::max(beam.n_s, 2);
    return beam;
}

using Beam = VirtualBeam<double>;

}  // namespace vic
