#include "vic/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace vic {

Polarity parse_polarity(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "bright" || lower == "fiber-bright") return Polarity::FiberBright;
    if (lower == "dark" || lower == "fiber-dark") return Polarity::FiberDark;
    throw ConfigError("unknown polarity '" + std::string(name) + "' (expected bright or dark)");
}

std::string to_string(Polarity polarity) {
    return polarity == Polarity::FiberBright ? "bright" : "dark";
}

Raster::Raster(PixelArray values, Polarity polarity) : f_(std::move(values)), polarity_(polarity) {}

Raster Raster::normalized(const PixelArray& raw, Polarity polarity) {
    if (raw.size() == 0) throw DegenerateImage("image has no pixels");
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    if (!(hi > lo)) throw DegenerateImage("image is constant; nothing to correlate");
    PixelArray f = (raw.array() - lo) / (hi - lo);
    if (polarity == Polarity::FiberDark) f = 1.0 - f.array();
    return Raster(std::move(f), polarity);
}

namespace {

struct CubicWeights {
    std::array<double, 4> w;
    std::array<double, 4> dw;
};

// Catmull-Rom weights for the taps at offsets -1, 0, 1, 2 and their t-derivatives.
CubicWeights catmull_rom(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {{0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
             0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)},
            {0.5 * (-3.0 * t2 + 4.0 * t - 1.0), 0.5 * (9.0 * t2 - 10.0 * t),
             0.5 * (-9.0 * t2 + 8.0 * t + 1.0), 0.5 * (3.0 * t2 - 2.0 * t)}};
}

std::string describe(const Eigen::Vector2d& X) {
    std::ostringstream os;
    os << "(" << X(0) << ", " << X(1) << ")";
    return os.str();
}

}  // namespace

bool Raster::contains(const Eigen::Vector2d& X) const {
    return std::isfinite(X(0)) && std::isfinite(X(1)) && X(0) >= 1.0 && X(1) >= 1.0 &&
           X(0) <= width() - 2.0 && X(1) <= height() - 2.0;
}

double Raster::sample(const Eigen::Vector2d& X) const {
    Eigen::Vector2d unused;
    return sample(X, unused);
}

double Raster::sample(const Eigen::Vector2d& X, Eigen::Vector2d& gradient) const {
    if (!contains(X)) {
        throw OutOfBounds(X, "sample point " + describe(X) + " leaves the bicubic support of a " +
                                 std::to_string(width()) + "x" + std::to_string(height()) + " image");
    }
    const int ci = static_cast<int>(std::floor(X(0)));
    const int ri = static_cast<int>(std::floor(X(1)));
    const CubicWeights wc = catmull_rom(X(0) - ci);
    const CubicWeights wr = catmull_rom(X(1) - ri);
    const int max_col = width() - 1;
    const int max_row = height() - 1;

    double value = 0.0, d_col = 0.0, d_row = 0.0;
    for (int a = 0; a < 4; ++a) {
        // Taps at the far edge only occur with zero weight (t = 0).
        const int row = std::min(ri - 1 + a, max_row);
        double line = 0.0, dline = 0.0;
        for (int b = 0; b < 4; ++b) {
            const double v = f_(row, std::min(ci - 1 + b, max_col));
            line += wc.w[b] * v;
            dline += wc.dw[b] * v;
        }
        value += wr.w[a] * line;
        d_col += wr.w[a] * dline;
        d_row += wr.dw[a] * line;
    }
    gradient = {d_col, d_row};
    return value;
}

namespace {

bool has_png_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::array<unsigned char, 8> sig{};
    in.read(reinterpret_cast<char*>(sig.data()), sig.size());
    return in.gcount() == 8 && png_sig_cmp(sig.data(), 0, 8) == 0;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) { throw IoError(std::string("PNG: ") + msg); }
void png_warning_handler(png_structp, png_const_charp) {}

PixelArray read_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path.string());
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_read_struct(png, info, nullptr); }
    } guard{&png, &info};
    if (!info) throw IoError("libpng initialisation failed");

    png_init_io(png, fp.get());
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_swap(png);  // native little-endian uint16 rows
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    const int bytes = png_get_bit_depth(png, info) == 16 ? 2 : 1;
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<unsigned char> buffer(rowbytes * height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowbytes;
    png_read_image(png, rows.data());

    PixelArray out(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            auto channel = [&](int c) -> double {
                const unsigned char* p = rows[y] + (x * channels + c) * bytes;
                if (bytes == 1) return p[0];
                return static_cast<double>(p[0] | (p[1] << 8));
            };
            if (channels >= 3) {
                out(y, x) = 0.2126 * channel(0) + 0.7152 * channel(1) + 0.0722 * channel(2);
            } else {
                out(y, x) = channel(0);
            }
        }
    }
    return out;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

PixelArray read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string magic = pgm_token(in);
    if (magic != "P2" && magic != "P5") throw IoError(path.string() + " is neither PNG nor PGM (P2/P5)");
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(pgm_token(in));
        height = std::stoi(pgm_token(in));
        maxval = std::stoi(pgm_token(in));
    } catch (const std::exception&) {
        throw IoError("malformed PGM header in " + path.string());
    }
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
        throw IoError("invalid PGM dimensions in " + path.string());
    }
    PixelArray out(height, width);
    if (magic == "P2") {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                int v;
                if (!(in >> v)) throw IoError("truncated PGM data in " + path.string());
                out(y, x) = v;
            }
        }
        return out;
    }
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> data(static_cast<std::size_t>(width) * height * bytes);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) {
        throw IoError("truncated PGM data in " + path.string());
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * width + x) * bytes;
            out(y, x) = bytes == 1 ? data[i] : static_cast<double>((data[i] << 8) | data[i + 1]);
        }
    }
    return out;
}

}  // namespace

PixelArray load_raw(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("cannot read image " + path.string());
    return has_png_signature(path) ? read_png(path) : read_pgm(path);
}

Raster load(const std::filesystem::path& path, Polarity polarity) {
    return Raster::normalized(load_raw(path), polarity);
}

void save_png(const PixelArray& values, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw IoError("PNG bit depth must be 8 or 16");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
    if (!png) throw IoError("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_write_struct(png, info); }
    } guard{&png, &info};
    if (!info) throw IoError("libpng initialisation failed");

    const int width = static_cast<int>(values.cols());
    const int height = static_cast<int>(values.rows());
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int bytes = bit_depth / 8;
    const double top = bit_depth == 8 ? 255.0 : 65535.0;
    std::vector<unsigned char> row(static_cast<std::size_t>(width) * bytes);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const auto v = static_cast<unsigned>(std::lround(std::clamp(values(y, x), 0.0, 1.0) * top));
            if (bytes == 1) {
                row[x] = static_cast<unsigned char>(v);
            } else {
                row[2 * x] = static_cast<unsigned char>(v >> 8);  // PNG is big-endian
                row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
}

void save_pgm(const PixelArray& values, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw IoError("PGM bit depth must be 8 or 16");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const int top = bit_depth == 8 ? 255 : 65535;
    out << "P5\n" << values.cols() << " " << values.rows() << "\n" << top << "\n";
    for (Eigen::Index y = 0; y < values.rows(); ++y) {
        for (Eigen::Index x = 0; x < values.cols(); ++x) {
            const auto v = static_cast<unsigned>(std::lround(std::clamp(values(y, x), 0.0, 1.0) * top));
            if (bit_depth == 8) {
                out.put(static_cast<char>(v));
            } else {
                out.put(static_cast<char>(v >> 8));
                out.put(static_cast<char>(v & 0xff));
            }
        }
    }
}

UnwrapResult unwrap(const Raster& raster, const Shape& p, const Basis& basis, const Beam& beam) {
    const auto kin = beam_kinematics(p, basis, beam.n_s, false);
    const auto r = beam.r_nodes();
    PixelArray strip(beam.n_r, beam.n_s);
    for (int i = 0; i < beam.n_s; ++i) {
        for (int j = 0; j < beam.n_r; ++j) {
            const Eigen::Vector2d X = kin.x.row(i).transpose() + r(j) * kin.nu.row(i).transpose();
            strip(j, i) = raster.sample(X);
        }
    }
    double sum = 0.0;
    for (int i = 0; i < beam.n_s; ++i) {
        for (int j = 0; j < beam.n_r; ++j) {
            const double d = strip(j, i) - strip(beam.n_r - 1 - j, i);
            sum += d * d;
        }
    }
    UnwrapResult out;
    out.asymmetry = std::sqrt(sum / (double(beam.n_s) * beam.n_r));
    out.strip = Raster(std::move(strip), raster.polarity());
    return out;
}

}  // namespace vic
