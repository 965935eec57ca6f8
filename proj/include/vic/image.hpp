#pragma once

#include "vic/basis.hpp"
#include "vic/geometry.hpp"
#include "vic/virtual_beam.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <string_view>

namespace vic {

/// Which way the fiber contrasts with the background in the raw file.
/// Internally the fiber is always bright (FiberDark inputs are inverted).
enum class Polarity { FiberBright, FiberDark };

Polarity parse_polarity(std::string_view name);
std::string to_string(Polarity polarity);

using PixelArray = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Immutable grayscale image. Pixel (col, row) is centred at integer coordinates
/// X = (col, row), so x1 runs along columns and x2 along rows.
class Raster {
public:
    Raster() = default;
    /// Wraps values as-is (rows x cols = height x width).
    explicit Raster(PixelArray values, Polarity polarity = Polarity::FiberBright);

    /// Min-max normalizes raw values to [0, 1], inverting for FiberDark.
    /// Throws DegenerateImage on a constant image.
    static Raster normalized(const PixelArray& raw, Polarity polarity);

    int width() const { return static_cast<int>(f_.cols()); }
    int height() const { return static_cast<int>(f_.rows()); }
    Polarity polarity() const { return polarity_; }
    const PixelArray& values() const { return f_; }
    double at(int col, int row) const { return f_(row, col); }

    /// True when the 4x4 Catmull-Rom support of X lies inside the image.
    bool contains(const Eigen::Vector2d& X) const;

    /// Catmull-Rom bicubic value at X; throws OutOfBounds outside the support.
    double sample(const Eigen::Vector2d& X) const;
    /// Value and spatial gradient (d/dx1, d/dx2) of the same interpolant.
    double sample(const Eigen::Vector2d& X, Eigen::Vector2d& gradient) const;

private:
    PixelArray f_;
    Polarity polarity_ = Polarity::FiberBright;
};

/// Reads 8/16-bit PNG or PGM (P2/P5). Color PNGs are reduced with Rec.709 luma weights.
Raster load(const std::filesystem::path& path, Polarity polarity = Polarity::FiberBright);

/// Raw pixel values as stored in the file (no normalization), gray or luma.
PixelArray load_raw(const std::filesystem::path& path);

/// Writes values clamped to [0, 1] as a grayscale PNG (bit_depth 8 or 16).
void save_png(const PixelArray& values, const std::filesystem::path& path, int bit_depth = 8);
inline void save_png(const Raster& raster, const std::filesystem::path& path, int bit_depth = 8) {
    save_png(raster.values(), path, bit_depth);
}

/// Writes an 8-bit binary PGM (P5) or 16-bit when bit_depth = 16.
void save_pgm(const PixelArray& values, const std::filesystem::path& path, int bit_depth = 8);

struct UnwrapResult {
    /// Width n_s (along s), height n_r (along r, row j at r_j from -R to R).
    Raster strip;
    /// RMS of strip(s, r) - strip(s, -r) over the mesh.
    double asymmetry = 0.0;
};

/// Resamples the image into the (s, r) frame of the virtual beam.
UnwrapResult unwrap(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam);

}  // namespace vic
