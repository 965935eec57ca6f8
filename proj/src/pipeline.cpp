#include "vic/pipeline.hpp"

#include "vic/virtual_beam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vic {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

FitConfig fit_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const int version = get_or(j, "schema_version", 1);
    if (version != 1) throw ConfigError("unsupported config schema_version " + std::to_string(version));
    FitConfig c;
    c.family = parse_basis_family(get_or<std::string>(j, "basis", to_string(c.family)));
    c.order = get_or(j, "order", c.order);
    c.half_width = get_or(j, "half_width", c.half_width);
    c.refine = get_or(j, "refine", c.refine);
    if (j.contains("seed")) {
        const auto seed = get_or<std::vector<double>>(j, "seed", {});
        if (seed.size() != 2) throw ConfigError("seed must be [x1, x2]");
        c.seed = {seed[0], seed[1]};
    }
    c.seed_angle = get_or(j, "seed_angle_deg", c.seed_angle / kDeg) * kDeg;
    c.segment_length = get_or(j, "segment_length", c.segment_length);
    c.max_segments = get_or(j, "max_segments", c.max_segments);
    if (j.contains("length") && !j.at("length").is_null()) c.length = get_or(j, "length", 0.0);
    if (j.contains("init_order") && !j.at("init_order").is_null()) c.init_order = get_or(j, "init_order", 0);
    c.order_step = get_or(j, "order_step", c.order_step);
    c.freeze = get_or(j, "freeze", c.freeze);
    c.polarity = parse_polarity(get_or<std::string>(j, "polarity", to_string(c.polarity)));
    c.backtracking = get_or(j, "backtracking", c.backtracking);
    c.detect_end = get_or(j, "detect_end", c.detect_end);
    c.max_iters = get_or(j, "max_iters", c.max_iters);
    c.rel_tol = get_or(j, "rel_tol", c.rel_tol);
    if (c.order < 0) throw ConfigError("order must be >= 0");
    if (c.family == BasisFamily::LegendreShifted && c.order > kMaxLegendreOrder) {
        throw OrderTooHigh("Legendre order " + std::to_string(c.order) + " exceeds the limit of " +
                           std::to_string(kMaxLegendreOrder));
    }
    if (!(c.half_width > 0.0)) throw ConfigError("half_width must be positive");
    if (!(c.refine >= 1.0)) throw ConfigError("refine must be >= 1");
    if (!(c.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
    if (c.max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (c.length && !(*c.length > 0.0)) throw ConfigError("length must be positive");
    return c;
}

json fit_config_to_json(const FitConfig& c) {
    json j{{"schema_version", 1},
           {"basis", to_string(c.family)},
           {"order", c.order},
           {"half_width", c.half_width},
           {"refine", c.refine},
           {"seed", {c.seed(0), c.seed(1)}},
           {"seed_angle_deg", c.seed_angle / kDeg},
           {"segment_length", c.segment_length},
           {"max_segments", c.max_segments},
           {"order_step", c.order_step},
           {"freeze", c.freeze},
           {"polarity", to_string(c.polarity)},
           {"backtracking", c.backtracking},
           {"detect_end", c.detect_end},
           {"max_iters", c.max_iters},
           {"rel_tol", c.rel_tol}};
    if (c.length) j["length"] = *c.length;
    if (c.init_order) j["init_order"] = *c.init_order;
    return j;
}

Basis PipelineResult::basis() const { return Basis(family, report.params.order()); }

FitOptions fit_options(const FitConfig& config, int dof) {
    FitOptions o;
    o.max_iters = config.max_iters;
    o.rel_tol = config.rel_tol;
    o.backtracking = config.backtracking;
    o.frozen = freeze_mask(config.freeze, dof);
    return o;
}

Shape pad_order(const Shape& p, int order) {
    if (order < p.order()) throw ConfigError("cannot pad a shape to a lower order");
    Shape out = p;
    out.A = Eigen::VectorXd::Zero(order + 1);
    out.A.head(p.A.size()) = p.A;
    return out;
}

Shape truncate_shape(const Shape& p, const Basis& basis, double new_length) {
    if (!(new_length > 0.0)) throw DomainError("truncated length must be positive");
    const int samples = std::max(200, 4 * (basis.size() + 1));
    Polyline poly;
    poly.length = new_length;
    poly.h = new_length / samples;
    poly.points.push_back(p.x0);
    for (int q = 0; q < samples; ++q) {
        const double s = (q + 0.5) * poly.h;
        poly.abscissae.push_back(s);
        poly.angles.push_back(theta_at(p, basis, std::min(s, p.L)));
    }
    return fit_series(poly, basis);
}

PipelineResult run_pipeline(const Raster& raster, const FitConfig& config) {
    PipelineResult result;
    result.family = config.family;

    TraceOptions trace_opts;
    trace_opts.half_width = config.half_width;
    trace_opts.refine = config.refine;
    double h = config.segment_length;
    int max_segments = config.max_segments;
    if (config.length) {
        max_segments = std::max(1, static_cast<int>(std::lround(*config.length / h)));
        h = *config.length / max_segments;
    }
    result.polyline = trace(raster, config.seed, config.seed_angle, h, max_segments, trace_opts);
    if (config.length) result.polyline.length = *config.length;

    const int segments = result.polyline.segments();
    int start_order = std::min(config.order, config.init_order.value_or(config.order));
    start_order = std::min(start_order, segments - 2);
    if (start_order < 0) {
        throw InitRankError("only " + std::to_string(segments) +
                            " segment(s) traced; need at least 2 to initialise the series");
    }
    const Basis start_basis(config.family, start_order);
    result.initial = fit_series(result.polyline, start_basis);

    auto run_fit = [&](const Shape& p0, int order) {
        const Basis basis(config.family, order);
        const Beam beam = build_mesh(p0.L, config.half_width, config.refine);
        result.stages.push_back(fit(raster, p0, basis, beam, fit_options(config, p0.dof())));
        return result.stages.back();
    };

    // Continuation in the order: each stage starts from the previous optimum.
    FitReport current = run_fit(result.initial, start_order);
    int order = start_order;
    while (order < config.order) {
        const int step = config.order_step > 0 ? config.order_step : config.order - order;
        const int next = std::min(config.order, order + step);
        current = run_fit(pad_order(current.params, next), next);
        order = next;
    }

    if (config.detect_end) {
        const Basis basis(config.family, order);
        const Beam beam = build_mesh(current.params.L, config.half_width, config.refine);
        result.profile = phi_profile(raster, current.params, basis, beam);
        result.end = detect_end(*result.profile, config.half_width);
        if (result.end && result.end->s_end < current.params.L) {
            current = run_fit(truncate_shape(current.params, basis, result.end->s_end), order);
        }
    }
    result.report = current;
    return result;
}

std::vector<SweepRow> sweep_orders(const Raster& raster, const FitConfig& config, int n_min, int n_max) {
    if (n_min < 0 || n_max < n_min) throw ConfigError("sweep needs 0 <= N_min <= N_max");
    FitConfig first = config;
    first.order = n_min;
    const PipelineResult start = run_pipeline(raster, first);

    std::vector<SweepRow> rows;
    auto record = [&](int order, const FitReport& r) {
        rows.push_back({order, r.final_phi(), r.status, r.condition_estimate, r.iterations});
    };
    record(n_min, start.report);
    Shape current = start.report.params;
    for (int order = n_min + 1; order <= n_max; ++order) {
        const Basis basis(config.family, order);
        const Shape p0 = pad_order(current, order);
        const Beam beam = build_mesh(p0.L, config.half_width, config.refine);
        const FitReport r = fit(raster, p0, basis, beam, fit_options(config, p0.dof()));
        record(order, r);
        current = r.params;
    }
    return rows;
}

}  // namespace vic
