#include "vic/init.hpp"

#include "vic/correlation.hpp"
#include "vic/virtual_beam.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vic {

namespace {

const Basis& straight_basis() {
    static const Basis basis(BasisFamily::LegendreShifted, 0);
    return basis;
}

double image_median(const Raster& raster) {
    std::vector<double> v(raster.values().data(), raster.values().data() + raster.values().size());
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

struct AngleMin {
    double angle;
    double phi;
};

// Coarse scan over [centre - range, centre + range], then golden-section refinement
// inside the bracket around the best grid point.
AngleMin search_angle(const Raster& raster, const Eigen::Vector2d& start, double centre, double h,
                      const TraceOptions& o) {
    auto eval = [&](double a) { return segment_phi(raster, start, a, h, o); };
    const int n = std::max(3, o.coarse_samples);
    const double lo = centre - o.search_half_range;
    const double step = 2.0 * o.search_half_range / (n - 1);
    int best = 0;
    double best_phi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double v = eval(lo + i * step);
        if (v < best_phi) {
            best_phi = v;
            best = i;
        }
    }
    if (!std::isfinite(best_phi)) return {centre, best_phi};

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo + std::max(0, best - 1) * step;
    double b = lo + std::min(n - 1, best + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < o.golden_iterations; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    AngleMin out{0.5 * (a + b), eval(0.5 * (a + b))};
    if (!(out.phi <= best_phi)) out = {lo + best * step, best_phi};
    return out;
}

}  // namespace

double segment_phi(const Raster& raster, const Eigen::Vector2d& start, double angle, double h,
                   const TraceOptions& options) {
    Shape seg;
    seg.x0 = start;
    seg.theta0 = angle;
    seg.A = Eigen::VectorXd::Zero(1);
    seg.L = h;
    const Beam beam = build_mesh(h, options.half_width, options.refine);
    try {
        return phi(raster, seg, straight_basis(), beam);
    } catch (const OutOfBounds&) {
        return std::numeric_limits<double>::infinity();
    }
}

double background_phi(const Raster& raster, double h, const TraceOptions& options) {
    const Beam beam = build_mesh(h, options.half_width, options.refine);
    const double b = image_median(raster);
    const Eigen::VectorXd r = beam.r_nodes();
    const Eigen::VectorXd wr = beam.r_weights();
    double across = 0.0;
    for (int j = 0; j < beam.n_r; ++j) {
        const double e = b - luminance(r(j), beam.R);
        across += e * e * wr(j);
    }
    return across * beam.s_weights(h).sum();
}

Polyline trace(const Raster& raster, const Eigen::Vector2d& seed, double seed_angle, double h, int max_segments,
               const TraceOptions& options) {
    if (!(h >= 2.0 * options.half_width)) {
        throw ConfigError("segment length " + std::to_string(h) + " must be at least the beam width 2R = " +
                          std::to_string(2.0 * options.half_width));
    }
    if (max_segments < 1) throw ConfigError("max_segments must be >= 1");
    if (!raster.contains(seed)) throw SeedError("seed lies outside the image interior");

    const double limit = options.stop_ratio * background_phi(raster, h, options);
    Polyline poly;
    poly.h = h;
    poly.points.push_back(seed);
    Eigen::Vector2d start = seed;
    double centre = seed_angle;
    for (int q = 0; q < max_segments; ++q) {
        const AngleMin best = search_angle(raster, start, centre, h, options);
        if (!(best.phi <= limit)) {
            if (q == 0) {
                throw SeedError("no fiber found at the seed: best segment Phi " + std::to_string(best.phi) +
                                " vs background threshold " + std::to_string(limit));
            }
            break;
        }
        poly.angles.push_back(best.angle);
        poly.abscissae.push_back((q + 0.5) * h);
        poly.segment_phi.push_back(best.phi);
        start = start + h * Eigen::Vector2d(std::cos(best.angle), std::sin(best.angle));
        poly.points.push_back(start);
        centre = best.angle;
    }
    poly.length = h * poly.segments();
    return poly;
}

Shape fit_series(const Polyline& poly, const Basis& basis) {
    const int rows = poly.segments();
    const int cols = basis.size() + 1;
    if (rows < cols) {
        throw InitRankError("polyline has " + std::to_string(rows) + " angles but order " +
                            std::to_string(basis.order()) + " needs at least " + std::to_string(cols));
    }
    if (poly.abscissae.size() != poly.angles.size() || !(poly.length > 0.0) || poly.points.empty()) {
        throw InitRankError("polyline is malformed");
    }
    const double L = poly.length;
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (int q = 0; q < rows; ++q) {
        const double sr = std::clamp(poly.abscissae[q] / L, 0.0, 1.0);
        A(q, 0) = 1.0;  // theta_{-1}
        A.row(q).tail(cols - 1) = theta_row(basis, sr).transpose();
        b(q) = poly.angles[q] / L;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
        throw InitRankError("angle system is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                            std::to_string(cols) + "); abscissae are degenerate for this basis");
    }
    const Eigen::VectorXd coeffs = qr.solve(b);
    Shape p;
    p.x0 = poly.points.front();
    p.theta0 = coeffs(0) * L;
    p.A = coeffs.tail(cols - 1);
    p.L = L;
    return p;
}

}  // namespace vic
