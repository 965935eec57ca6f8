// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [artifact_dir]

#include "vic/beam_oracle.hpp"
#include "vic/commands.hpp"
#include "vic/geometry.hpp"
#include "vic/image.hpp"
#include "vic/io.hpp"
#include "vic/length_detect.hpp"
#include "vic/pipeline.hpp"
#include "vic/synth.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace vic;
namespace fs = std::filesystem;

namespace tol {
// 1. cantilever end-to-end
constexpr double kCantileverRms = 0.5;      // px
constexpr double kClampSlope = 0.01;        // rad
constexpr double kTipCurvature = 0.02;      // |gamma(L)| L
constexpr double kCantileverSeconds = 60.0;
// 2. order sweep
constexpr int kSweepMax = 8;
constexpr int kIllConditionedBefore = 30;
constexpr double kPhiSlack = 1e-12;         // relative, for "non-increasing"
// 3. gradient oracle
constexpr int kGradientStates = 10;
constexpr double kGradientRel = 1e-4;
constexpr double kGradientFloor = 1e-8;
constexpr double kGradientSeconds = 120.0;
// 4. round trip
constexpr double kRoundTripRms = 0.05;      // px
constexpr double kRoundTripCoeff = 1e-3;    // |dA_n| L
// 5. loop
constexpr double kLoopHausdorff = 1.0;      // px
constexpr double kLoopSeconds = 300.0;
// 6. end detection
constexpr double kEndLow = 396.0, kEndHigh = 404.0;
// 7. oracle
constexpr double kSmallLoadRel = 1e-3;
constexpr double kGridRatio = 4.0, kGridRatioSlack = 0.5;
// 8. unwrap
constexpr double kFloorFactor = 2.0;
}  // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double gamma_end_times_length(const Shape& p, const Basis& b) { return gamma_at(p, b, p.L) * p.L; }

// Legendre fit of the oracle angles; close enough to the elastica to act as the truth shape.
Shape oracle_shape(const CantileverShape& oracle, int order) {
    Polyline poly;
    poly.points.push_back({oracle.x1(0), oracle.x2(0)});
    poly.length = oracle.s(oracle.size() - 1);
    poly.h = poly.length / 200;
    for (Eigen::Index i = 0; i < oracle.size(); i += 10) {
        poly.abscissae.push_back(oracle.s(i));
        poly.angles.push_back(oracle.theta(i));
    }
    return fit_series(poly, Basis(BasisFamily::LegendreShifted, order));
}

// Pipeline run on the cantilever fixture, shared by criteria 1, 2 and 8.
struct CantileverRun {
    PipelineResult result;
    double seconds = 0.0;
};

const CantileverRun& cantilever_run(const fs::path& dir) {
    static const CantileverRun run = [&] {
        const auto& fx = testkit::cantilever();
        save_png(fx.image, dir / "cantilever.png", 16);
        CantileverRun r;
        const auto t0 = Clock::now();
        r.result = cmd_fit(dir / "cantilever.png", fx.config, dir / "cantilever_fit");
        r.seconds = seconds_since(t0);
        return r;
    }();
    return run;
}

Outcome cantilever_end_to_end(const fs::path& dir) {
    const auto& fx = testkit::cantilever();
    const auto& run = cantilever_run(dir);
    const Shape& p = run.result.report.params;
    const Basis b = run.result.basis();
    const double rms = testkit::rms_normal_distance(p, b, fx.line);
    const double tip = gamma_end_times_length(p, b);
    Outcome o;
    o.pass = run.result.report.converged && rms <= tol::kCantileverRms && std::abs(p.theta0) <= tol::kClampSlope &&
             std::abs(tip) <= tol::kTipCurvature && run.seconds <= tol::kCantileverSeconds;
    o.detail = fmt("status=%s rms=%.4f px theta0=%.2e gamma(L)L=%.2e L=%.1f time=%.1fs",
                   to_string(run.result.report.status).c_str(), rms, p.theta0, tip, p.L, run.seconds);
    return o;
}

Outcome order_sweep(const fs::path& dir) {
    const auto& fx = testkit::cantilever();
    save_png(fx.image, dir / "cantilever.png", 16);
    const auto rows = cmd_sweep_order(dir / "cantilever.png", fx.config, 1, tol::kIllConditionedBefore - 1,
                                      dir / "sweep.csv");
    bool monotone = true;
    std::string phis;
    for (int i = 0; i < tol::kSweepMax; ++i) {
        phis += fmt("%s%.6g", i ? "," : "", rows[i].phi);
        if (i > 0 && rows[i].phi > rows[i - 1].phi * (1.0 + tol::kPhiSlack)) monotone = false;
        if (rows[i].status != FitStatus::Converged) monotone = false;
    }
    int ill = -1;
    for (const auto& row : rows) {
        if (row.status == FitStatus::IllConditioned) {
            ill = row.order;
            break;
        }
    }
    Outcome o;
    o.pass = monotone && ill > 0 && ill < tol::kIllConditionedBefore;
    o.detail = fmt("phi(1..8)=[%s] first IllConditioned at N=%d", phis.c_str(), ill);
    return o;
}

Outcome gradient_oracle() {
    const auto& fx = testkit::cantilever();
    const auto t0 = Clock::now();
    const PipelineResult res = run_pipeline(fx.image, fx.config);
    const Shape opt = res.report.params;
    const Basis b = res.basis();
    const Beam beam = build_mesh(opt.L, fx.config.half_width, fx.config.refine);

    // Units that move the mesh by about one pixel per component.
    auto unit = [&](int k) { return k < 2 ? 1.0 : (k == 2 ? 1.0 / opt.L : 1.0 / (opt.L * opt.L)); };
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    int checked = 0;
    for (int state = 0; state < tol::kGradientStates; ++state) {
        Eigen::VectorXd v = opt.as_vector();
        for (int k = 0; k < opt.dof(); ++k) v(k) += u(rng) * unit(k);
        const Shape p = Shape::from_vector(v, opt.L);
        const NormalSystem sys = assemble(fx.image, p, b, beam);
        for (int k = 0; k < p.dof(); ++k) {
            const double h = 1e-5 * unit(k);
            Eigen::VectorXd vp = v, vm = v;
            vp(k) += h;
            vm(k) -= h;
            const double fd =
                (phi(fx.image, Shape::from_vector(vp, p.L), b, beam) - phi(fx.image, Shape::from_vector(vm, p.L), b, beam)) /
                (2 * h);
            if (std::abs(fd) <= tol::kGradientFloor) continue;
            worst = std::max(worst, std::abs(-2.0 * sys.rhs(k) - fd) / std::abs(fd));
            ++checked;
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = checked > 0 && worst <= tol::kGradientRel && secs <= tol::kGradientSeconds;
    o.detail = fmt("states=%d components=%d max rel err=%.2e time=%.1fs", tol::kGradientStates, checked, worst, secs);
    return o;
}

Outcome round_trip() {
    struct Case {
        int order;
        Eigen::VectorXd A;
    };
    const std::vector<Case> cases = {
        {0, (Eigen::VectorXd(1) << 2e-3).finished()},
        {1, (Eigen::VectorXd(2) << 2e-3, -1e-3).finished()},
        {3, (Eigen::VectorXd(4) << 3e-3, 1.5e-3, -1e-3, 5e-4).finished()},
    };
    constexpr double R = 5.0;
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        Shape truth;
        truth.x0 = {30, 90};
        truth.theta0 = 0.1;
        truth.A = c.A;
        truth.L = 300;
        const Basis b(BasisFamily::LegendreShifted, c.order);
        RenderOptions ro;
        ro.width = 360;
        ro.height = 240;
        ro.fiber_half_width = R;
        ro.profile = FiberProfile::Cosine;
        const Raster img = render(truth, b, ro);

        FitConfig cfg;
        cfg.order = c.order;
        cfg.half_width = R;
        cfg.seed = truth.x0;
        cfg.seed_angle = truth.theta0;
        cfg.segment_length = 20;
        cfg.length = truth.L;
        cfg.freeze = {"x0_1"};
        cfg.rel_tol = 1e-10;
        const PipelineResult res = run_pipeline(img, cfg);
        const Shape& p = res.report.params;
        const double rms = testkit::rms_normal_distance(p, b, dense_polyline(truth, b));
        const double coeff = (p.A - truth.A).cwiseAbs().maxCoeff() * truth.L;
        const bool ok = rms < tol::kRoundTripRms && coeff < tol::kRoundTripCoeff;
        pass = pass && ok;
        detail += fmt("%sN=%d rms=%.2e |dA|L=%.2e", detail.empty() ? "" : "; ", c.order, rms, coeff);
    }
    return {pass, detail};
}

// One full loop: Gaussian curvature bump with total turning 2 pi, projected on Fourier order 40.
Shape loop_truth(const Basis& b) {
    constexpr double L = 600.0, centre = 0.5, width = 0.06;
    const double peak = 2.0 * std::numbers::pi / (width * L * std::sqrt(2.0 * std::numbers::pi));
    auto gamma = [&](double t) { return peak * std::exp(-0.5 * std::pow((t - centre) / width, 2)); };
    Shape p;
    p.x0 = {40, 60};
    p.theta0 = 0.0;
    p.L = L;
    p.A = Eigen::VectorXd::Zero(b.size());
    constexpr int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        const double w = (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) / (3.0 * n);
        for (int k = 0; k < b.size(); ++k) p.A(k) += w * gamma(t) * eval_gamma(b, k, t) * (k == 0 ? 1.0 : 2.0);
    }
    return p;
}

Outcome loop_robustness(const fs::path& dir) {
    const Basis truth_basis(BasisFamily::Fourier, 40);
    const Shape truth = loop_truth(truth_basis);
    RenderOptions ro;
    ro.width = 600;
    ro.height = 130;
    ro.fiber_half_width = 1.0;
    ro.background = 0.2;
    ro.noise_sigma = 0.1;
    ro.rng_seed = 11;
    const Raster img = render(truth, truth_basis, ro);
    save_png(img, dir / "loop.png", 16);

    FitConfig cfg;
    cfg.family = BasisFamily::Fourier;
    cfg.order = 60;
    cfg.half_width = 2.0;
    cfg.seed = truth.x0;
    cfg.seed_angle = truth.theta0;
    cfg.segment_length = 6.0;
    cfg.length = truth.L;
    cfg.init_order = 20;
    cfg.order_step = 20;
    cfg.freeze = {"x0_1"};

    const auto t0 = Clock::now();
    const PipelineResult res = run_pipeline(img, cfg);
    const double secs = seconds_since(t0);
    const Shape& p = res.report.params;
    const double hd = testkit::hausdorff(dense_polyline(p, res.basis()), dense_polyline(truth, truth_basis));
    Outcome o;
    o.pass = hd < tol::kLoopHausdorff && secs <= tol::kLoopSeconds;
    o.detail = fmt("status=%s hausdorff=%.3f px time=%.1fs", to_string(res.report.status).c_str(), hd, secs);
    return o;
}

Outcome end_detection() {
    Shape truth;
    truth.x0 = {30, 60};
    truth.theta0 = 0.05;
    truth.A = Eigen::VectorXd::Constant(1, 4e-4);
    truth.L = 400;
    const Basis b(BasisFamily::LegendreShifted, 0);
    RenderOptions ro;
    ro.width = 560;
    ro.height = 200;
    ro.fiber_half_width = 3.0;
    ro.background = 0.1;
    ro.noise_sigma = 0.02;
    ro.rng_seed = 3;
    const Raster img = render(truth, b, ro);

    auto detect = [&](double length) {
        FitConfig cfg;
        cfg.order = 0;
        cfg.half_width = 5.0;
        cfg.seed = truth.x0;
        cfg.seed_angle = truth.theta0;
        cfg.segment_length = 20;
        cfg.length = length;
        cfg.freeze = {"x0_1"};
        const PipelineResult res = run_pipeline(img, cfg);
        const Shape& p = res.report.params;
        return detect_end(phi_profile(img, p, b, build_mesh(p.L, cfg.half_width, cfg.refine)), cfg.half_width);
    };
    const auto over = detect(480.0);
    const auto under = detect(380.0);
    Outcome o;
    o.pass = over && over->s_end >= tol::kEndLow && over->s_end <= tol::kEndHigh && !under;
    o.detail = fmt("L=480 -> s_end=%s; L=380 -> %s", over ? fmt("%.2f", over->s_end).c_str() : "NoEndFound",
                   under ? fmt("s_end=%.2f", under->s_end).c_str() : "NoEndFound");
    return o;
}

Outcome oracle_checks() {
    auto tip = [](const CantileverSpec& spec) {
        const auto shape = solve_elastica(spec);
        return shape.x2(shape.size() - 1);
    };
    CantileverSpec light;
    light.density = 1e-3;
    const double linear = light.line_weight() * std::pow(light.length, 4) / (8 * light.flexural_rigidity());
    const double rel = std::abs(tip(light) - linear) / linear;

    const auto shape = solve_elastica(CantileverSpec{});
    const bool exact_bc = shape.theta(0) == 0.0 && shape.gamma(shape.size() - 1) == 0.0;

    CantileverSpec grid;
    grid.n_nodes = 101;
    const double d1 = tip(grid);
    grid.n_nodes = 201;
    const double d2 = tip(grid);
    grid.n_nodes = 401;
    const double d3 = tip(grid);
    const double ratio = std::abs(d1 - d2) / std::abs(d2 - d3);

    Outcome o;
    o.pass = rel <= tol::kSmallLoadRel && exact_bc && std::abs(ratio - tol::kGridRatio) <= tol::kGridRatioSlack;
    o.detail = fmt("small-load rel err=%.2e exact bc=%s grid ratio=%.3f", rel, exact_bc ? "yes" : "no", ratio);
    return o;
}

Outcome unwrap_symmetry(const fs::path& dir) {
    const auto& fx = testkit::cantilever();
    const auto& n3 = cantilever_run(dir).result;
    FitConfig cfg8 = fx.config;
    cfg8.order = 8;
    const PipelineResult n8 = run_pipeline(fx.image, cfg8);

    const double R = fx.config.half_width;
    auto asym = [&](const Raster& img, const Shape& p, const Basis& b) {
        return unwrap(img, p, b, build_mesh(p.L, R, fx.config.refine)).asymmetry;
    };
    const double a3 = asym(fx.image, n3.report.params, n3.basis());
    const double a8 = asym(fx.image, n8.report.params, n8.basis());

    const auto clean = testkit::make_cantilever(0.0);
    const Basis truth_basis(BasisFamily::LegendreShifted, 10);
    const double floor = asym(clean.image, oracle_shape(fx.oracle, 10), truth_basis);
    const double at_opt = asym(clean.image, n3.report.params, n3.basis());

    Outcome o;
    o.pass = a8 < a3 && at_opt <= tol::kFloorFactor * floor;
    o.detail = fmt("noisy N=3 %.5f N=8 %.5f; noiseless at optimum %.5f floor %.5f", a3, a8, at_opt, floor);
    return o;
}

std::vector<fs::path> files_under(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void produce_artifacts(const fs::path& dir) {
    fs::create_directories(dir);
    Scene scene;
    scene.family = BasisFamily::LegendreShifted;
    scene.params.x0 = {20, 60};
    scene.params.theta0 = 0.1;
    scene.params.A = (Eigen::VectorXd(2) << 2e-3, 1e-3).finished();
    scene.params.L = 200;
    scene.render.width = 260;
    scene.render.height = 160;
    scene.render.background = 0.1;
    scene.render.noise_sigma = 0.02;
    scene.render.rng_seed = 9;
    cmd_synth(scene, dir / "scene.png");

    FitConfig cfg;
    cfg.order = 2;
    cfg.half_width = 5;
    cfg.seed = scene.params.x0;
    cfg.seed_angle = scene.params.theta0;
    cfg.segment_length = 20;
    cfg.freeze = {"x0_1"};
    cfg.detect_end = true;
    cmd_fit(dir / "scene.png", cfg, dir / "fit");
    cmd_unwrap(dir / "scene.png", read_json(dir / "fit" / "report.json"), cfg, dir / "unwrap.png");
    cmd_sweep_order(dir / "scene.png", cfg, 1, 4, dir / "sweep.csv");
    cmd_oracle(CantileverSpec{}, dir / "oracle.csv", testkit::kCantileverPxPerMeter, {30.0, 150.0});
}

Outcome determinism(const fs::path& dir) {
    const fs::path a = dir / "run_a", b = dir / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    produce_artifacts(a);
    produce_artifacts(b);
    const auto fa = files_under(a), fb = files_under(b);
    int differing = 0;
    for (const auto& f : fa) {
        if (std::find(fb.begin(), fb.end(), f) == fb.end() || bytes(a / f) != bytes(b / f)) ++differing;
    }
    Outcome o;
    o.pass = fa == fb && !fa.empty() && differing == 0;
    o.detail = fmt("%zu artifacts, %d differ", fa.size(), differing);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "vic_acceptance";
    fs::create_directories(dir);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 cantilever end-to-end", [&] { return cantilever_end_to_end(dir); }},
        {"2 order sweep", [&] { return order_sweep(dir); }},
        {"3 gradient oracle", [] { return gradient_oracle(); }},
        {"4 round trip", [] { return round_trip(); }},
        {"5 loop", [&] { return loop_robustness(dir); }},
        {"6 end detection", [] { return end_detection(); }},
        {"7 elastica oracle", [] { return oracle_checks(); }},
        {"8 unwrap symmetry", [&] { return unwrap_symmetry(dir); }},
        {"9 determinism", [&] { return determinism(dir); }},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
