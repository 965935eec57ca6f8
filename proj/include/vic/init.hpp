#pragma once

// Initial shape estimate: trace the fiber with straight segments, each found by a
// one-parameter rotation search, then fit the curvature series to the segment angles.

#include "vic/basis.hpp"
#include "vic/geometry.hpp"
#include "vic/image.hpp"

#include <Eigen/Core>

#include <vector>

namespace vic {

struct Polyline {
    std::vector<Eigen::Vector2d> points;  // Q+2 vertices, equally spaced by h
    std::vector<double> angles;           // Q+1 segment directions, unwrapped
    std::vector<double> abscissae;        // arc-length position assigned to each angle
    std::vector<double> segment_phi;      // best Phi of each segment
    double h = 0.0;
    double length = 0.0;                  // (Q+1) h unless a known length overrides it

    int segments() const { return static_cast<int>(angles.size()); }
};

struct TraceOptions {
    double half_width = 3.0;          // R of the segment beams, px
    double refine = 3.0;
    double search_half_range = 1.0471975511965976;  // 60 degrees
    int golden_iterations = 40;
    int coarse_samples = 25;          // grid scan that brackets the golden-section search
    double stop_ratio = 0.8;          // stop once segment Phi > stop_ratio * Phi_background
};

/// Phi of a straight segment of length h at `angle` rotating about `start`.
/// Returns +inf when the segment leaves the image.
double segment_phi(const Raster& raster, const Eigen::Vector2d& start, double angle, double h,
                   const TraceOptions& options);

/// Phi of the same segment over a uniform background at the image median.
double background_phi(const Raster& raster, double h, const TraceOptions& options);

/// Throws SeedError when the first segment cannot be told apart from background.
Polyline trace(const Raster& raster, const Eigen::Vector2d& seed, double seed_angle, double h, int max_segments,
               const TraceOptions& options = {});

/// Least-squares fit of theta(s_q)/L = A_{-1} + sum_n A_n theta_n(s_q / L) to the polyline
/// angles (square when N + 2 = Q + 1). Throws InitRankError on a rank-deficient system.
Shape fit_series(const Polyline& poly, const Basis& basis);

}  // namespace vic
