#pragma once

// File-level operations behind the CLI subcommands. Each writes its artifacts and
// throws a vic::Error on failure; exit_code() maps errors to process exit codes.

#include "vic/beam_oracle.hpp"
#include "vic/io.hpp"
#include "vic/pipeline.hpp"

#include <json.hpp>

#include <exception>
#include <filesystem>
#include <vector>

namespace vic {

namespace fs = std::filesystem;

/// Writes report.json, mean_line.csv, overlay.png and polyline.csv into out_dir,
/// plus profile.csv when end detection ran.
PipelineResult cmd_fit(const fs::path& image, const FitConfig& config, const fs::path& out_dir);

/// Renders the scene to a PNG (8 or 16 bit).
Raster cmd_synth(const Scene& scene, const fs::path& png, int bit_depth = 8);

/// Solves the cantilever and writes its mean line as CSV. With px_per_meter > 0 the
/// shape is first rescaled to pixels about origin.
CantileverShape cmd_oracle(const CantileverSpec& spec, const fs::path& csv, double px_per_meter = 0.0,
                           const Eigen::Vector2d& origin = Eigen::Vector2d::Zero());

/// Unwraps the image along the shape stored in a fit report and writes the strip PNG.
UnwrapResult cmd_unwrap(const fs::path& image, const nlohmann::json& report, const FitConfig& config,
                        const fs::path& png);

/// Writes "N,phi,status,condition,iterations" rows.
std::vector<SweepRow> cmd_sweep_order(const fs::path& image, const FitConfig& config, int n_min, int n_max,
                                      const fs::path& csv);

/// Mean line of p drawn in white over the min-max normalized input image.
PixelArray overlay(const PixelArray& raw, const Shape& p, const Basis& basis);

/// 0 ok, 2 I/O, 3 config, 4 numeric failure; anything unrecognised counts as numeric.
int exit_code(const std::exception& e);
/// {"error": kind, "message": what, "exit_code": code}
nlohmann::json error_json(const std::exception& e);

}  // namespace vic
