// vic: fit a parametric virtual beam to a fiber image, plus synthetic scenes,
// the cantilever oracle, unwrapping and order sweeps.

#include "vic/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace vic;

// Flags shared by fit, unwrap and sweep-order; unset flags leave the config untouched.
struct FitFlags {
    std::string config;
    std::optional<std::string> basis;
    std::optional<int> order;
    std::optional<double> half_width, refine, seed_angle, segment_length, length;
    std::optional<std::vector<double>> seed;
    std::vector<std::string> freeze;
    std::optional<std::string> polarity;
    bool no_backtracking = false;
    bool detect_end = false;

    void add_to(CLI::App* app) {
        app->add_option("--config", config, "JSON config (fields overridden by flags)");
        app->add_option("--basis", basis, "legendre | fourier");
        app->add_option("--order", order, "basis order N");
        app->add_option("--half-width", half_width, "virtual beam half-width R, px");
        app->add_option("--refine", refine, "mesh points per px");
        app->add_option("--seed", seed, "seed point x,y in px")->delimiter(',')->expected(2);
        app->add_option("--seed-angle", seed_angle, "seed direction, degrees");
        app->add_option("--segment-length", segment_length, "trace segment length h, px");
        app->add_option("--length", length, "known fiber length, px");
        app->add_option("--freeze", freeze, "parameters held fixed, e.g. x0_1")->delimiter(',');
        app->add_option("--polarity", polarity, "bright | dark fiber");
        app->add_flag("--no-backtracking", no_backtracking, "take full Gauss-Newton steps");
        app->add_flag("--detect-end", detect_end, "detect the fiber tip and re-fit");
    }

    FitConfig resolve() const {
        nlohmann::json j = config.empty() ? nlohmann::json::object() : read_json(config);
        if (basis) j["basis"] = *basis;
        if (order) j["order"] = *order;
        if (half_width) j["half_width"] = *half_width;
        if (refine) j["refine"] = *refine;
        if (seed) j["seed"] = *seed;
        if (seed_angle) j["seed_angle_deg"] = *seed_angle;
        if (segment_length) j["segment_length"] = *segment_length;
        if (length) j["length"] = *length;
        if (!freeze.empty()) j["freeze"] = freeze;
        if (polarity) j["polarity"] = *polarity;
        if (no_backtracking) j["backtracking"] = false;
        if (detect_end) j["detect_end"] = true;
        return fit_config_from_json(j);
    }
};

int fail(const std::exception& e) {
    std::cerr << error_json(e).dump() << '\n';
    return exit_code(e);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual image correlation: identify the mean line of a fiber in an image"};
    app.require_subcommand(1);

    std::string image, out, scene_path, spec_path, report_path;

    auto* fit_cmd = app.add_subcommand("fit", "trace, fit and export a fiber shape");
    FitFlags fit_flags;
    fit_cmd->add_option("image", image, "input PNG or PGM")->required();
    fit_cmd->add_option("-o,--out", out, "output directory")->required();
    fit_flags.add_to(fit_cmd);

    auto* synth_cmd = app.add_subcommand("synth", "render a synthetic fiber scene");
    int bit_depth = 8;
    synth_cmd->add_option("scene", scene_path, "scene JSON")->required();
    synth_cmd->add_option("-o,--out", out, "output PNG")->required();
    synth_cmd->add_option("--bit-depth", bit_depth, "8 or 16")->check(CLI::IsMember({8, 16}));

    auto* oracle_cmd = app.add_subcommand("oracle", "solve the heavy cantilever elastica");
    double px_per_meter = 0.0;
    std::vector<double> origin{0.0, 0.0};
    oracle_cmd->add_option("spec", spec_path, "cantilever JSON (SI units); defaults when omitted");
    oracle_cmd->add_option("-o,--out", out, "output CSV")->required();
    oracle_cmd->add_option("--px-per-meter", px_per_meter, "rescale to pixels");
    oracle_cmd->add_option("--origin", origin, "clamp position x,y in px")->delimiter(',')->expected(2);

    auto* unwrap_cmd = app.add_subcommand("unwrap", "resample the image in the beam frame");
    FitFlags unwrap_flags;
    unwrap_cmd->add_option("image", image, "input PNG or PGM")->required();
    unwrap_cmd->add_option("report", report_path, "report.json from fit")->required();
    unwrap_cmd->add_option("-o,--out", out, "output strip PNG")->required();
    unwrap_flags.add_to(unwrap_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep-order", "fit at increasing basis orders");
    FitFlags sweep_flags;
    int n_min = 1, n_max = 8;
    sweep_cmd->add_option("image", image, "input PNG or PGM")->required();
    sweep_cmd->add_option("-o,--out", out, "output CSV")->required();
    sweep_cmd->add_option("--min", n_min, "first order");
    sweep_cmd->add_option("--max", n_max, "last order");
    sweep_flags.add_to(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*fit_cmd) {
            const FitConfig config = fit_flags.resolve();
            const auto result = cmd_fit(image, config, out);
            std::cout << to_string(result.report.status) << " phi=" << format_number(result.report.final_phi())
                      << " iterations=" << result.report.iterations << '\n';
            return result.report.converged ? 0 : 4;
        }
        if (*synth_cmd) {
            cmd_synth(scene_from_json(read_json(scene_path)), out, bit_depth);
        } else if (*oracle_cmd) {
            const CantileverSpec spec = spec_path.empty() ? CantileverSpec{} : cantilever_from_json(read_json(spec_path));
            const auto shape = cmd_oracle(spec, out, px_per_meter, {origin[0], origin[1]});
            std::cout << "iterations=" << shape.iterations << '\n';
        } else if (*unwrap_cmd) {
            const auto result = cmd_unwrap(image, read_json(report_path), unwrap_flags.resolve(), out);
            std::cout << "asymmetry=" << format_number(result.asymmetry) << '\n';
        } else if (*sweep_cmd) {
            for (const auto& r : cmd_sweep_order(image, sweep_flags.resolve(), n_min, n_max, out)) {
                std::cout << r.order << ' ' << format_number(r.phi) << ' ' << to_string(r.status) << '\n';
            }
        }
    } catch (const std::exception& e) {
        return fail(e);
    }
    return 0;
}
