#pragma once

// Fixtures and geometric error measures shared by the unit and acceptance tests.

#include "vic/beam_oracle.hpp"
#include "vic/image.hpp"
#include "vic/pipeline.hpp"
#include "vic/synth.hpp"

#include <filesystem>
#include <vector>

namespace vic::testkit {

/// Heavy aluminium cantilever rendered at 400 px/m, clamped at (30, 150).
struct CantileverFixture {
    CantileverShape oracle;   // in pixels
    Eigen::MatrixX2d line;    // oracle mean line as a polyline
    Raster image;
    FitConfig config;         // Legendre N=3, R=6, x0_1 frozen, end detection on
};

inline constexpr double kCantileverPxPerMeter = 400.0;

CantileverFixture make_cantilever(double noise_sigma = 0.02, std::uint64_t seed = 7);
/// Cached noisy fixture (the one used by most tests).
const CantileverFixture& cantilever();

Eigen::MatrixX2d to_polyline(const std::vector<Frame>& frames);
Eigen::MatrixX2d to_polyline(const CantileverShape& shape);

/// RMS of the distance from n samples of the fitted mean line to the truth polyline.
double rms_normal_distance(const Shape& p, const Basis& basis, const Eigen::MatrixX2d& truth, int n = 1001);

/// Symmetric Hausdorff distance between two polylines, measured point-to-polyline.
double hausdorff(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace vic::testkit
