#include "vic/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace vic {

using nlohmann::json;

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace {

void write_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << format_number(v);
        first = false;
    }
    out << '\n';
}

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
T optional(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

}  // namespace

void write_mean_line_csv(std::ostream& out, const std::vector<Frame>& frames) {
    out << "s,x1,x2,theta,gamma\n";
    for (const auto& f : frames) write_row(out, {f.s, f.x(0), f.x(1), f.theta, f.gamma});
}

void write_mean_line_csv(std::ostream& out, const CantileverShape& shape) {
    out << "s,x1,x2,theta,gamma\n";
    for (Eigen::Index i = 0; i < shape.size(); ++i) {
        write_row(out, {shape.s(i), shape.x1(i), shape.x2(i), shape.theta(i), shape.gamma(i)});
    }
}

void write_profile_csv(std::ostream& out, const PhiProfile& profile) {
    out << "s,phi_per_length\n";
    for (Eigen::Index i = 0; i < profile.s.size(); ++i) write_row(out, {profile.s(i), profile.phi(i)});
}

void write_polyline_csv(std::ostream& out, const Polyline& poly) {
    out << "q,s,x1,x2,theta\n";
    for (int q = 0; q < poly.segments(); ++q) {
        write_row(out, {double(q), q * poly.h, poly.points[q](0), poly.points[q](1), poly.angles[q]});
    }
}

json shape_to_json(const Shape& p, const Basis& basis) {
    return json{{"basis", to_string(basis.family())},
                {"order", basis.order()},
                {"x0", {p.x0(0), p.x0(1)}},
                {"theta0", p.theta0},
                {"A", vector_json(p.A)},
                {"L", p.L}};
}

Basis basis_from_json(const json& j) {
    const auto family = parse_basis_family(required<std::string>(j, "basis"));
    return Basis(family, required<int>(j, "order"));
}

Shape shape_from_json(const json& j) {
    Shape p;
    const auto x0 = required<std::vector<double>>(j, "x0");
    if (x0.size() != 2) throw ConfigError("x0 must have two components");
    p.x0 = {x0[0], x0[1]};
    p.theta0 = required<double>(j, "theta0");
    const auto A = required<std::vector<double>>(j, "A");
    p.A = Eigen::Map<const Eigen::VectorXd>(A.data(), static_cast<Eigen::Index>(A.size()));
    p.L = required<double>(j, "L");
    if (j.contains("order") && static_cast<int>(A.size()) != j.at("order").get<int>() + 1) {
        throw ConfigError("A has " + std::to_string(A.size()) + " entries but order is " +
                          std::to_string(j.at("order").get<int>()));
    }
    if (!(p.L > 0.0)) throw ConfigError("L must be positive");
    return p;
}

json report_to_json(const FitReport& report, const Basis& basis) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = shape_to_json(report.params, basis);
    j["phi_history"] = report.phi_history;
    j["step_norms"] = report.step_norms;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["status"] = to_string(report.status);
    j["condition_estimate"] = report.condition_estimate;
    if (!report.message.empty()) j["message"] = report.message;
    return j;
}

CantileverSpec cantilever_from_json(const json& j) {
    CantileverSpec s;
    s.length = optional(j, "length_m", s.length);
    s.radius = optional(j, "radius_m", s.radius);
    s.young_modulus = optional(j, "young_modulus_pa", s.young_modulus);
    s.density = optional(j, "density_kg_m3", s.density);
    s.gravity = optional(j, "gravity_m_s2", s.gravity);
    s.n_nodes = optional(j, "n_nodes", s.n_nodes);
    s.validate();
    return s;
}

json cantilever_to_json(const CantileverSpec& s) {
    return json{{"schema_version", kSchemaVersion}, {"length_m", s.length},     {"radius_m", s.radius},
                {"young_modulus_pa", s.young_modulus}, {"density_kg_m3", s.density}, {"gravity_m_s2", s.gravity},
                {"n_nodes", s.n_nodes}};
}

Scene scene_from_json(const json& j) {
    Scene scene;
    const json& params = j.contains("params") ? j.at("params") : j;
    scene.params = shape_from_json(params);
    scene.family = parse_basis_family(required<std::string>(params, "basis"));
    RenderOptions& r = scene.render;
    r.fiber_half_width = optional(j, "fiber_half_width", r.fiber_half_width);
    r.profile = parse_profile(optional<std::string>(j, "profile", to_string(r.profile)));
    r.width = required<int>(j, "width");
    r.height = required<int>(j, "height");
    r.background = optional(j, "background", r.background);
    r.noise_sigma = optional(j, "noise_sigma", r.noise_sigma);
    r.rng_seed = optional<std::uint64_t>(j, "seed", r.rng_seed);
    return scene;
}

json scene_to_json(const Scene& scene) {
    const Basis basis(scene.family, scene.params.order());
    return json{{"schema_version", kSchemaVersion},
                {"params", shape_to_json(scene.params, basis)},
                {"profile", to_string(scene.render.profile)},
                {"fiber_half_width", scene.render.fiber_half_width},
                {"width", scene.render.width},
                {"height", scene.render.height},
                {"background", scene.render.background},
                {"noise_sigma", scene.render.noise_sigma},
                {"seed", scene.render.rng_seed}};
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace vic
