#pragma once

// Ground-truth fiber renderer for round-trip tests.

#include "vic/basis.hpp"
#include "vic/geometry.hpp"
#include "vic/image.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace vic {

/// Transverse luminance of the rendered fiber as a function of u = d / half_width.
/// Cosine: (1 + cos(pi u)) / 2 for u <= 1; Gaussian: exp(-2 u^2) (sigma = half_width / 2);
/// FlatDisk: 1 for u <= 1.
enum class FiberProfile { Cosine, Gaussian, FlatDisk };

FiberProfile parse_profile(std::string_view name);
std::string to_string(FiberProfile profile);
double profile_value(FiberProfile profile, double u);

struct RenderOptions {
    double fiber_half_width = 3.0;  // px
    FiberProfile profile = FiberProfile::Gaussian;
    int width = 256;
    int height = 256;
    double background = 0.0;
    double noise_sigma = 0.0;
    std::uint64_t rng_seed = 0;
    int supersample = 4;
    double points_per_px = 10.0;
};

/// Dense mean-line polyline (points_per_px samples per pixel of arc), n x 2.
Eigen::MatrixX2d dense_polyline(const Shape& p, const Basis& basis, double points_per_px = 10.0);

/// Exact distance from c to the polyline (minimum over its segments).
double distance_to_polyline(const Eigen::Vector2d& c, const Eigen::MatrixX2d& polyline);

/// Distances from the supersample centres of every pixel to the polyline; rows x cols =
/// (height * supersample) x (width * supersample). Entries farther than cutoff are +inf.
PixelArray distance_map(const Eigen::MatrixX2d& polyline, int width, int height, int supersample, double cutoff);

/// Renders the fiber described by p. Throws RenderBounds when the mean line comes
/// closer than fiber_half_width + 2 px to the image border.
Raster render(const Shape& p, const Basis& basis, const RenderOptions& options);

/// Same, for a mean line given as a dense polyline (n x 2, px).
Raster render_polyline(const Eigen::MatrixX2d& line, const RenderOptions& options);

}  // namespace vic
