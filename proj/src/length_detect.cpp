#include "vic/length_detect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vic {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

double spacing(const PhiProfile& profile) {
    return profile.s.size() > 1 ? profile.s(1) - profile.s(0) : 1.0;
}

}  // namespace

PhiProfile phi_profile(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam) {
    return phi_per_station(raster, p, basis, beam);
}

Eigen::VectorXd smooth_profile(const PhiProfile& profile, double window) {
    const Eigen::Index n = profile.phi.size();
    const auto half = static_cast<Eigen::Index>(std::lround(0.5 * window / spacing(profile)));
    Eigen::VectorXd prefix(n + 1);
    prefix(0) = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) prefix(i + 1) = prefix(i) + profile.phi(i);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
        const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half);
        out(i) = (prefix(hi + 1) - prefix(lo)) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::optional<EndDetection> detect_end(const PhiProfile& profile, double half_width) {
    const auto n = static_cast<std::size_t>(profile.phi.size());
    if (n < 4) return std::nullopt;
    const Eigen::VectorXd smooth = smooth_profile(profile, 2.0 * half_width);

    std::vector<double> first(smooth.data(), smooth.data() + n / 2);
    const double med = median(first);
    std::vector<double> dev(first.size());
    std::transform(first.begin(), first.end(), dev.begin(), [&](double v) { return std::abs(v - med); });
    const double threshold = med + 4.0 * median(dev);

    const auto persist = static_cast<std::size_t>(std::ceil(2.0 * half_width / spacing(profile)));
    // The first half is the reference level, so the tip is sought beyond it.
    std::size_t onset = n;
    for (std::size_t i = n / 2; i < n; ++i) {
        if (!(smooth(i) > threshold)) continue;
        std::size_t j = i;
        while (j < n && smooth(j) > threshold) ++j;
        if (j - i >= persist) {
            onset = i;
            break;
        }
        i = j;
    }
    if (onset == n) return std::nullopt;

    // Locate the half-way crossing between the interior level and the overshoot plateau.
    std::vector<double> tail(smooth.data() + onset, smooth.data() + n);
    const double level = 0.5 * (med + median(tail));
    std::size_t i = onset;
    while (i > 0 && smooth(i - 1) >= level) --i;
    while (i < n - 1 && smooth(i) < level) ++i;
    double s_end = profile.s(i);
    if (i > 0 && smooth(i) != smooth(i - 1)) {
        const double t = (level - smooth(i - 1)) / (smooth(i) - smooth(i - 1));
        s_end = profile.s(i - 1) + std::clamp(t, 0.0, 1.0) * (profile.s(i) - profile.s(i - 1));
    }
    return EndDetection{s_end, threshold, onset};
}

}  // namespace vic
