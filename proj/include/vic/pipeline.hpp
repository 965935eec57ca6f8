#pragma once

// End-to-end identification: trace -> series fit -> Gauss-Newton fit -> optional
// end detection and re-fit. Shared by the CLI and the acceptance suite.

#include "vic/correlation.hpp"
#include "vic/init.hpp"
#include "vic/length_detect.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace vic {

/// Units: pixels and radians unless the field name says otherwise.
struct FitConfig {
    BasisFamily family = BasisFamily::LegendreShifted;
    int order = 3;
    double half_width = 6.0;       // R, px
    double refine = 3.0;           // mesh points per px
    Eigen::Vector2d seed = Eigen::Vector2d::Zero();
    double seed_angle = 0.0;       // rad
    double segment_length = 24.0;  // h, px
    int max_segments = 500;
    std::optional<double> length;  // known fiber length, px
    std::optional<int> init_order; // order of the first fit (defaults to min(order, Q-1))
    int order_step = 0;            // order increment during continuation (0 = jump to order)
    std::vector<std::string> freeze;
    Polarity polarity = Polarity::FiberBright;
    bool backtracking = true;
    bool detect_end = false;
    int max_iters = 100;
    double rel_tol = 1e-6;
};

/// Parses the JSON config; every key is optional except where noted in the README.
FitConfig fit_config_from_json(const nlohmann::json& j);
nlohmann::json fit_config_to_json(const FitConfig& c);

struct PipelineResult {
    BasisFamily family = BasisFamily::LegendreShifted;
    Polyline polyline;
    Shape initial;                       // fit_series output
    std::vector<FitReport> stages;       // every Gauss-Newton run, in order
    std::optional<EndDetection> end;     // when detect_end ran and found a tip
    std::optional<PhiProfile> profile;   // residual profile used for detection
    FitReport report;                    // final stage

    Basis basis() const;
};

FitOptions fit_options(const FitConfig& config, int dof);

/// Appends zero amplitudes so p is expressed at a higher order (same curve).
Shape pad_order(const Shape& p, int order);

/// Re-expresses the curve restricted to [0, new_length] with the same basis order.
Shape truncate_shape(const Shape& p, const Basis& basis, double new_length);

PipelineResult run_pipeline(const Raster& raster, const FitConfig& config);

struct SweepRow {
    int order = 0;
    double phi = 0.0;
    FitStatus status = FitStatus::Converged;
    double condition = 0.0;
    int iterations = 0;
};

/// Runs the pipeline at order n_min, then raises the order one at a time, each fit
/// starting from the previous result padded with a zero amplitude.
std::vector<SweepRow> sweep_orders(const Raster& raster, const FitConfig& config, int n_min, int n_max);

}  // namespace vic
