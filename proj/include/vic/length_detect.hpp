#pragma once

// Fiber-end detection from the per-station residual phi(s): once the virtual beam runs
// past the tip the residual jumps to the bare-background level.

#include "vic/correlation.hpp"

#include <optional>

namespace vic {

/// Per-station residual; sum_i w_i phi_i equals phi() for the same inputs.
PhiProfile phi_profile(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam);

struct EndDetection {
    double s_end = 0.0;        // px
    double threshold = 0.0;    // median + 4 MAD of the first half
    std::size_t onset = 0;     // first station above threshold
};

/// Returns the tip abscissa, or nullopt (NoEndFound) when the smoothed residual never
/// stays above median + 4 MAD (first half of the beam) for at least 2R of arc.
/// The returned abscissa is where the smoothed residual crosses halfway between the
/// interior median and the overshoot plateau.
std::optional<EndDetection> detect_end(const PhiProfile& profile, double half_width);

/// Centred moving average over `window` px of arc (truncated at the ends).
Eigen::VectorXd smooth_profile(const PhiProfile& profile, double window);

}  // namespace vic
