#pragma once

// CSV and JSON serialization for shapes, fit reports and diagnostics.

#include "vic/beam_oracle.hpp"
#include "vic/correlation.hpp"
#include "vic/geometry.hpp"
#include "vic/init.hpp"
#include "vic/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace vic {

inline constexpr int kSchemaVersion = 1;

/// "%.9g" formatting used for every CSV number.
std::string format_number(double value);

/// Header "s,x1,x2,theta,gamma".
void write_mean_line_csv(std::ostream& out, const std::vector<Frame>& frames);
void write_mean_line_csv(std::ostream& out, const CantileverShape& shape);
/// Header "s,phi_per_length".
void write_profile_csv(std::ostream& out, const PhiProfile& profile);
/// Header "q,s,x1,x2,theta" (start vertex of each segment).
void write_polyline_csv(std::ostream& out, const Polyline& poly);

/// Shape plus its basis: {"basis", "order", "x0", "theta0", "A", "L"}.
nlohmann::json shape_to_json(const Shape& p, const Basis& basis);
Shape shape_from_json(const nlohmann::json& j);
Basis basis_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FitReport& report, const Basis& basis);

/// {"length_m", "radius_m", "young_modulus_pa", "density_kg_m3", "gravity_m_s2", "n_nodes"}.
CantileverSpec cantilever_from_json(const nlohmann::json& j);
nlohmann::json cantilever_to_json(const CantileverSpec& spec);

/// Synthetic scene: shape, basis and RenderOptions.
struct Scene {
    Shape params;
    BasisFamily family = BasisFamily::LegendreShifted;
    RenderOptions render;
};
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& scene);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vic
