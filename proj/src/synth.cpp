#include "vic/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace vic {

FiberProfile parse_profile(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "cosine") return FiberProfile::Cosine;
    if (lower == "gaussian") return FiberProfile::Gaussian;
    if (lower == "flatdisk" || lower == "flat_disk" || lower == "flat") return FiberProfile::FlatDisk;
    throw ConfigError("unknown fiber profile '" + std::string(name) + "'");
}

std::string to_string(FiberProfile profile) {
    switch (profile) {
        case FiberProfile::Cosine: return "cosine";
        case FiberProfile::Gaussian: return "gaussian";
        case FiberProfile::FlatDisk: return "flatdisk";
    }
    return "unknown";
}

double profile_value(FiberProfile profile, double u) {
    u = std::abs(u);
    switch (profile) {
        case FiberProfile::Cosine: return u <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * u)) : 0.0;
        case FiberProfile::Gaussian: return std::exp(-2.0 * u * u);
        case FiberProfile::FlatDisk: return u <= 1.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

namespace {

// Beyond this many half-widths the profile is zero (or below 1e-13 for the Gaussian).
double profile_support(FiberProfile profile) { return profile == FiberProfile::Gaussian ? 4.0 : 1.0; }

double segment_distance(const Eigen::Vector2d& c, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (c - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (a + t * ab - c).norm();
}

}  // namespace

Eigen::MatrixX2d dense_polyline(const Shape& p, const Basis& basis, double points_per_px) {
    const int n = std::max(2, static_cast<int>(std::ceil(p.L * points_per_px)) + 1);
    return beam_kinematics(p, basis, n, false).x;
}

double distance_to_polyline(const Eigen::Vector2d& c, const Eigen::MatrixX2d& polyline) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < polyline.rows(); ++i) {
        best = std::min(best, segment_distance(c, polyline.row(i).transpose(), polyline.row(i + 1).transpose()));
    }
    return best;
}

PixelArray distance_map(const Eigen::MatrixX2d& polyline, int width, int height, int supersample, double cutoff) {
    const int W = width * supersample;
    const int H = height * supersample;
    PixelArray dist = PixelArray::Constant(H, W, std::numeric_limits<double>::infinity());
    // Subsample (u, v) sits at pixel coordinate (u + 0.5) / ss - 0.5.
    const double ss = supersample;
    auto to_sub = [&](double x) { return (x + 0.5) * ss - 0.5; };
    for (Eigen::Index i = 0; i + 1 < polyline.rows(); ++i) {
        const Eigen::Vector2d a = polyline.row(i).transpose();
        const Eigen::Vector2d b = polyline.row(i + 1).transpose();
        const int u0 = std::max(0, static_cast<int>(std::floor(to_sub(std::min(a(0), b(0)) - cutoff))));
        const int u1 = std::min(W - 1, static_cast<int>(std::ceil(to_sub(std::max(a(0), b(0)) + cutoff))));
        const int v0 = std::max(0, static_cast<int>(std::floor(to_sub(std::min(a(1), b(1)) - cutoff))));
        const int v1 = std::min(H - 1, static_cast<int>(std::ceil(to_sub(std::max(a(1), b(1)) + cutoff))));
        for (int v = v0; v <= v1; ++v) {
            for (int u = u0; u <= u1; ++u) {
                const Eigen::Vector2d c((u + 0.5) / ss - 0.5, (v + 0.5) / ss - 0.5);
                const double d = segment_distance(c, a, b);
                if (d <= cutoff && d < dist(v, u)) dist(v, u) = d;
            }
        }
    }
    return dist;
}

Raster render(const Shape& p, const Basis& basis, const RenderOptions& options) {
    return render_polyline(dense_polyline(p, basis, options.points_per_px), options);
}

Raster render_polyline(const Eigen::MatrixX2d& line, const RenderOptions& options) {
    if (!(options.fiber_half_width > 0.0)) throw ConfigError("fiber half-width must be positive");
    if (options.width < 8 || options.height < 8) throw ConfigError("render size must be at least 8x8");
    if (options.supersample < 1) throw ConfigError("supersample must be >= 1");
    if (line.rows() < 2) throw ConfigError("render needs at least two mean-line points");

    const double margin = options.fiber_half_width + 2.0;
    for (Eigen::Index i = 0; i < line.rows(); ++i) {
        const double x = line(i, 0), y = line(i, 1);
        if (!(x >= margin && y >= margin && x <= options.width - 1 - margin && y <= options.height - 1 - margin)) {
            throw RenderBounds("mean line reaches (" + std::to_string(x) + ", " + std::to_string(y) +
                               "), closer than " + std::to_string(margin) + " px to the image border");
        }
    }

    const double cutoff = profile_support(options.profile) * options.fiber_half_width;
    const int ss = options.supersample;
    const PixelArray dist = distance_map(line, options.width, options.height, ss, cutoff);

    const double bg = options.background;
    PixelArray f(options.height, options.width);
    for (int row = 0; row < options.height; ++row) {
        for (int col = 0; col < options.width; ++col) {
            double acc = 0.0;
            for (int v = 0; v < ss; ++v) {
                for (int u = 0; u < ss; ++u) {
                    const double d = dist(row * ss + v, col * ss + u);
                    if (std::isfinite(d)) acc += profile_value(options.profile, d / options.fiber_half_width);
                }
            }
            f(row, col) = bg + (1.0 - bg) * acc / (ss * ss);
        }
    }

    if (options.noise_sigma > 0.0) {
        std::mt19937_64 rng(options.rng_seed);
        std::normal_distribution<double> noise(0.0, options.noise_sigma);
        for (int row = 0; row < options.height; ++row) {
            for (int col = 0; col < options.width; ++col) {
                f(row, col) = std::clamp(f(row, col) + noise(rng), 0.0, 1.0);
            }
        }
    }
    return Raster(std::move(f), Polarity::FiberBright);
}

}  // namespace vic
