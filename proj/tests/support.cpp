#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>

namespace vic::testkit {

CantileverFixture make_cantilever(double noise_sigma, std::uint64_t seed) {
    CantileverFixture fx;
    fx.oracle = rescale_to_pixels(solve_elastica(CantileverSpec{}), kCantileverPxPerMeter, {30.0, 150.0});
    fx.line = to_polyline(fx.oracle);

    RenderOptions ro;
    ro.width = 1060;
    ro.height = 500;
    ro.fiber_half_width = 3.0;
    ro.profile = FiberProfile::Gaussian;
    ro.background = 0.1;
    ro.noise_sigma = noise_sigma;
    ro.rng_seed = seed;
    fx.image = render_polyline(fx.line, ro);

    FitConfig& c = fx.config;
    c.family = BasisFamily::LegendreShifted;
    c.order = 3;
    c.half_width = 6.0;
    c.seed = {30.0, 152.0};
    c.seed_angle = 0.1;
    c.segment_length = 40.0;
    c.freeze = {"x0_1"};
    c.detect_end = true;
    return fx;
}

const CantileverFixture& cantilever() {
    static const CantileverFixture fx = make_cantilever();
    return fx;
}

Eigen::MatrixX2d to_polyline(const std::vector<Frame>& frames) {
    Eigen::MatrixX2d out(static_cast<Eigen::Index>(frames.size()), 2);
    for (std::size_t i = 0; i < frames.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = frames[i].x.transpose();
    return out;
}

Eigen::MatrixX2d to_polyline(const CantileverShape& shape) {
    Eigen::MatrixX2d out(shape.size(), 2);
    out.col(0) = shape.x1;
    out.col(1) = shape.x2;
    return out;
}

double rms_normal_distance(const Shape& p, const Basis& basis, const Eigen::MatrixX2d& truth, int n) {
    double sum = 0.0;
    for (const auto& f : mean_line(p, basis, n)) {
        const double d = distance_to_polyline(f.x, truth);
        sum += d * d;
    }
    return std::sqrt(sum / n);
}

double hausdorff(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b) {
    auto directed = [](const Eigen::MatrixX2d& from, const Eigen::MatrixX2d& to) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < from.rows(); ++i) {
            worst = std::max(worst, distance_to_polyline(from.row(i).transpose(), to));
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("vic_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace vic::testkit
