#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rcsclass/cwt.hpp"

namespace rcs {

const std::array<std::array<double, 3>, 128>& jet_colormap_128() {
    // Classic jet recipe for 128 levels: a triangular ramp u of width 3n-1
    // (n = 32) rises 1/n..1, holds 1 for n-1 entries, and falls back to 1/n.
    // Green occupies rows n/2+1 .. n/2+len(u), red sits n rows above green,
    // blue n rows below, each clipped to the table. Entries are exact
    // multiples of 1/32.
    static const std::array<std::array<double, 3>, 128> table = [] {
        constexpr int m = 128, n = 32;
        std::array<std::array<double, 3>, 128> t{};
        const int ulen = 3 * n - 1;
        auto u = [&](int k) {  // 0-based index into the ramp
            if (k < n) return static_cast<double>(k + 1) / n;
            if (k < 2 * n - 1) return 1.0;
            return static_cast<double>(3 * n - 1 - k) / n;
        };
        for (int k = 0; k < ulen; ++k) {
            const int g = n / 2 + k;  // 0-based row for the green channel
            const int r = g + n;
            const int b = g - n;
            if (g < m) t[g][1] = u(k);
            if (r < m) t[r][0] = u(k);
            if (b >= 0) t[b][2] = u(k);
        }
        return t;
    }();
    return table;
}

std::vector<std::vector<int>> levels_from_magnitudes(
    const std::vector<std::vector<double>>& magnitudes, int levels,
    bool* degenerate) {
    if (levels < 2 || levels > 128)
        throw ValidationError("colormap levels must lie in [2, 128]");
    if (magnitudes.empty() || magnitudes.front().empty())
        throw ValidationError("empty magnitude matrix");
    double lo = magnitudes[0][0], hi = magnitudes[0][0];
    for (const auto& row : magnitudes)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::vector<std::vector<int>> out(magnitudes.size());
    const bool degen = !(hi > lo);
    if (degenerate) *degenerate = degen;
    for (std::size_t r = 0; r < magnitudes.size(); ++r) {
        out[r].resize(magnitudes[r].size());
        for (std::size_t c = 0; c < magnitudes[r].size(); ++c) {
            if (degen) {
                out[r][c] = levels / 2;
            } else {
                const double t = (magnitudes[r][c] - lo) / (hi - lo);
                out[r][c] = std::clamp(
                    static_cast<int>(std::lround(t * (levels - 1))), 0,
                    levels - 1);
            }
        }
    }
    return out;
}

std::vector<double> resize_rgb(const std::vector<double>& rgb,
                               std::size_t in_width, std::size_t in_height,
                               std::size_t out_width, std::size_t out_height) {
    if (in_width == 0 || in_height == 0 || out_width == 0 || out_height == 0)
        throw ValidationError("resize_rgb: zero dimension");
    if (rgb.size() != in_width * in_height * 3)
        throw ValidationError("resize_rgb: buffer size mismatch");
    std::vector<double> out(out_width * out_height * 3);
    // Pixel-center alignment: output center (c + 0.5) maps to input
    // coordinate (c + 0.5) * in/out - 0.5, clamped to the valid range.
    auto axis = [](std::size_t c, std::size_t in, std::size_t out_n,
                   std::size_t& i0, std::size_t& i1, double& t) {
        double x = (static_cast<double>(c) + 0.5) * static_cast<double>(in) /
                       static_cast<double>(out_n) -
                   0.5;
        x = std::clamp(x, 0.0, static_cast<double>(in - 1));
        i0 = static_cast<std::size_t>(std::floor(x));
        i1 = std::min(i0 + 1, in - 1);
        t = x - static_cast<double>(i0);
    };
    for (std::size_t r = 0; r < out_height; ++r) {
        std::size_t r0, r1;
        double tr;
        axis(r, in_height, out_height, r0, r1, tr);
        for (std::size_t c = 0; c < out_width; ++c) {
            std::size_t c0, c1;
            double tc;
            axis(c, in_width, out_width, c0, c1, tc);
            for (int ch = 0; ch < 3; ++ch) {
                const double v00 = rgb[(r0 * in_width + c0) * 3 + ch];
                const double v01 = rgb[(r0 * in_width + c1) * 3 + ch];
                const double v10 = rgb[(r1 * in_width + c0) * 3 + ch];
                const double v11 = rgb[(r1 * in_width + c1) * 3 + ch];
                const double top = v00 + tc * (v01 - v00);
                const double bot = v10 + tc * (v11 - v10);
                out[(r * out_width + c) * 3 + ch] = top + tr * (bot - top);
            }
        }
    }
    return out;
}

Image process_scalogram(const Scalogram& s, int out_size, int colormap_levels) {
    if (out_size != 224 && out_size != 227)
        throw ValidationError("output size must be 224 or 227");
    bool degen = false;
    const auto levels = levels_from_magnitudes(s.magnitudes, colormap_levels, &degen);
    const auto& lut = jet_colormap_128();
    // Map a level index (0..levels-1) onto the fixed 128-entry table.
    auto lut_index = [&](int level) {
        return colormap_levels == 128
                   ? level
                   : static_cast<int>(std::lround(
                         static_cast<double>(level) * 127.0 /
                         (colormap_levels - 1)));
    };
    const std::size_t in_h = levels.size();
    const std::size_t in_w = levels.front().size();
    std::vector<double> rgb(in_w * in_h * 3);
    for (std::size_t r = 0; r < in_h; ++r)
        for (std::size_t c = 0; c < in_w; ++c) {
            const auto& entry = lut[static_cast<std::size_t>(lut_index(levels[r][c]))];
            for (int ch = 0; ch < 3; ++ch)
                rgb[(r * in_w + c) * 3 + ch] = entry[ch];
        }
    const std::size_t out_n = static_cast<std::size_t>(out_size);
    const std::vector<double> resized = resize_rgb(rgb, in_w, in_h, out_n, out_n);
    Image image;
    image.width = out_n;
    image.height = out_n;
    image.degenerate = degen;
    image.rgb.resize(resized.size());
    for (std::size_t i = 0; i < resized.size(); ++i)
        image.rgb[i] = static_cast<std::uint8_t>(
            std::clamp(std::lround(resized[i] * 255.0), 0L, 255L));
    return image;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    put_u32(out, crc);
}

}  // namespace

void write_png(const std::string& path, const Image& image) {
    if (image.rgb.size() != image.width * image.height * 3)
        throw ValidationError("write_png: pixel buffer size mismatch");
    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor RGB
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    put_chunk(png, "IHDR", ihdr);

    // Raw image stream: each scanline prefixed with filter byte 0 (none).
    std::vector<std::uint8_t> raw;
    raw.reserve(image.height * (1 + image.width * 3));
    for (std::size_t r = 0; r < image.height; ++r) {
        raw.push_back(0);
        raw.insert(raw.end(), image.rgb.begin() + r * image.width * 3,
                   image.rgb.begin() + (r + 1) * image.width * 3);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> idat(bound);
    if (compress2(idat.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  9) != Z_OK)
        throw NumericError("write_png: deflate failed");
    idat.resize(bound);
    put_chunk(png, "IDAT", idat);
    put_chunk(png, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(png.data()),
              static_cast<std::streamsize>(png.size()));
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace rcs
