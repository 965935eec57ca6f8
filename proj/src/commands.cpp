#include "vic/commands.hpp"

#include "vic/synth.hpp"

#include <cmath>
#include <fstream>

namespace vic {

using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

json pipeline_json(const PipelineResult& result, const FitConfig& config) {
    const Basis basis = result.basis();
    json j = report_to_json(result.report, basis);
    j["config"] = fit_config_to_json(config);
    j["initial"] = shape_to_json(result.initial, Basis(result.family, result.initial.order()));
    j["segments"] = result.polyline.segments();
    json stages = json::array();
    for (const auto& s : result.stages) {
        stages.push_back({{"order", s.params.order()},
                          {"L", s.params.L},
                          {"status", to_string(s.status)},
                          {"iterations", s.iterations},
                          {"phi", s.final_phi()}});
    }
    j["stages"] = stages;
    if (config.detect_end) {
        j["end"] = result.end ? json{{"s_end", result.end->s_end}, {"threshold", result.end->threshold}}
                              : json{{"s_end", nullptr}, {"status", "NoEndFound"}};
    }
    return j;
}

}  // namespace

PixelArray overlay(const PixelArray& raw, const Shape& p, const Basis& basis) {
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    PixelArray out = hi > lo ? PixelArray((raw.array() - lo) / (hi - lo)) : PixelArray::Zero(raw.rows(), raw.cols());
    const Eigen::MatrixX2d line = dense_polyline(p, basis, 2.0);
    for (Eigen::Index i = 0; i < line.rows(); ++i) {
        const long c = std::lround(line(i, 0));
        const long r = std::lround(line(i, 1));
        if (c >= 0 && r >= 0 && c < out.cols() && r < out.rows()) out(r, c) = 1.0;
    }
    return out;
}

PipelineResult cmd_fit(const fs::path& image, const FitConfig& config, const fs::path& out_dir) {
    const PixelArray raw = load_raw(image);
    const Raster raster = Raster::normalized(raw, config.polarity);
    const PipelineResult result = run_pipeline(raster, config);
    const Basis basis = result.basis();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    write_json(out_dir / "report.json", pipeline_json(result, config));
    {
        auto out = open_out(out_dir / "mean_line.csv");
        const int n = std::max(2, static_cast<int>(std::ceil(result.report.params.L)) + 1);
        write_mean_line_csv(out, mean_line(result.report.params, basis, n));
    }
    {
        auto out = open_out(out_dir / "polyline.csv");
        write_polyline_csv(out, result.polyline);
    }
    if (result.profile) {
        auto out = open_out(out_dir / "profile.csv");
        write_profile_csv(out, *result.profile);
    }
    save_png(overlay(raw, result.report.params, basis), out_dir / "overlay.png");
    return result;
}

Raster cmd_synth(const Scene& scene, const fs::path& png, int bit_depth) {
    const Basis basis(scene.family, scene.params.order());
    Raster img = render(scene.params, basis, scene.render);
    save_png(img, png, bit_depth);
    return img;
}

CantileverShape cmd_oracle(const CantileverSpec& spec, const fs::path& csv, double px_per_meter,
                           const Eigen::Vector2d& origin) {
    CantileverShape shape = solve_elastica(spec);
    if (px_per_meter > 0.0) shape = rescale_to_pixels(shape, px_per_meter, origin);
    auto out = open_out(csv);
    write_mean_line_csv(out, shape);
    return shape;
}

UnwrapResult cmd_unwrap(const fs::path& image, const json& report, const FitConfig& config, const fs::path& png) {
    const json& params = report.contains("params") ? report.at("params") : report;
    const Shape p = shape_from_json(params);
    const Basis basis = basis_from_json(params);
    const Raster raster = load(image, config.polarity);
    const Beam beam = build_mesh(p.L, config.half_width, config.refine);
    UnwrapResult result = unwrap(raster, p, basis, beam);
    save_png(result.strip, png);
    return result;
}

std::vector<SweepRow> cmd_sweep_order(const fs::path& image, const FitConfig& config, int n_min, int n_max,
                                      const fs::path& csv) {
    const Raster raster = load(image, config.polarity);
    const auto rows = sweep_orders(raster, config, n_min, n_max);
    auto out = open_out(csv);
    out << "N,phi,status,condition,iterations\n";
    for (const auto& r : rows) {
        out << r.order << ',' << format_number(r.phi) << ',' << to_string(r.status) << ','
            << format_number(r.condition) << ',' << r.iterations << '\n';
    }
    return rows;
}

int exit_code(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        switch (err->errorClass()) {
            case ErrorClass::Io: return 2;
            case ErrorClass::Config: return 3;
            case ErrorClass::Numeric: return 4;
        }
    }
    if (dynamic_cast<const json::exception*>(&e)) return 3;
    return 4;
}

json error_json(const std::exception& e) {
    std::string kind = "InternalError";
    if (const auto* err = dynamic_cast<const Error*>(&e)) kind = err->kind();
    else if (dynamic_cast<const json::exception*>(&e)) kind = "ConfigError";
    return json{{"error", kind}, {"message", e.what()}, {"exit_code", exit_code(e)}};
}

}  // namespace vic
