#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcsclass/errors.hpp"

namespace rcs {

// Two-dimensional magnitude display of the continuous wavelet transform:
// rows are scales (increasing), columns are sample positions.
struct Scalogram {
    std::vector<std::vector<double>> magnitudes;  // scale x position, >= 0
    std::vector<double> scales;                   // dilation per row, in samples
    std::vector<std::size_t> positions;           // sample index per column
};

// Continuous wavelet transform of a real sequence using the analytic Morlet
// mother wavelet (center frequency 6 rad/sample) with 1/a amplitude
// normalization, evaluated by frequency-domain multiplication over a
// reflectively padded copy of the signal. Scales are logarithmically spaced
// from 2 samples to length/4 samples.
//
// Preconditions: signal length >= 8, num_scales >= 4.
Scalogram cwt_transform(std::span<const double> signal, int num_scales);

// 8-bit RGB image, row-major, 3 bytes per pixel.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb;
    // True when the source magnitudes were all equal, in which case the image
    // is a uniform mid-colormap field rather than a rescaled map.
    bool degenerate = false;
};

// 128-entry jet lookup table (classic blue->cyan->yellow->red ramp), RGB in
// [0, 1]. The table is constructed once from the documented piecewise-linear
// recipe and never changes.
const std::array<std::array<double, 3>, 128>& jet_colormap_128();

// Min-max rescale of a magnitude matrix to integer levels 0..levels-1.
// Returns the level matrix and sets *degenerate when all magnitudes are equal
// (every level is then levels/2).
std::vector<std::vector<int>> levels_from_magnitudes(
    const std::vector<std::vector<double>>& magnitudes, int levels,
    bool* degenerate = nullptr);

// Bilinear resize of an interleaved RGB float image (values in [0, 1]) using
// pixel-center alignment. Exposed for testing.
std::vector<double> resize_rgb(const std::vector<double>& rgb,
                               std::size_t in_width, std::size_t in_height,
                               std::size_t out_width, std::size_t out_height);

// Full post-processing pipeline: min-max rescale to [0, levels-1]
// (levels = 128), map through the jet table, bilinear-resize to
// out_size x out_size RGB. out_size must be 224 or 227 (the supported
// downstream input sizes); colormap_levels must lie in [2, 128].
Image process_scalogram(const Scalogram& s, int out_size,
                        int colormap_levels = 128);

// Write an 8-bit RGB PNG. Deterministic byte-for-byte for identical pixels.
void write_png(const std::string& path, const Image& image);

// Write the raw magnitude matrix as CSV: header "scale,p<first>..p<last>",
// then one row per scale ("%.9g" fields).
void write_matrix_csv(const std::string& path, const Scalogram& s);

}  // namespace rcs
