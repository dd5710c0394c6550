#include "rcsclass/cwt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace rcs {

namespace {

constexpr double kMorletCenterFrequency = 6.0;  // rad/sample

// In-place iterative radix-2 FFT (inverse divides by n).
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Symmetric (mirror) extension of x to an arbitrary index: the extension is
// periodic with period 2n and reflects at both ends without gaps.
double mirror_sample(std::span<const double> x, long long idx) {
    const long long n = static_cast<long long>(x.size());
    long long m = idx % (2 * n);
    if (m < 0) m += 2 * n;
    return m < n ? x[static_cast<std::size_t>(m)]
                 : x[static_cast<std::size_t>(2 * n - 1 - m)];
}

}  // namespace

Scalogram cwt_transform(std::span<const double> signal, int num_scales) {
    const std::size_t n = signal.size();
    if (n < 8) throw ValidationError("cwt_transform: signal length must be >= 8");
    if (num_scales < 4)
        throw ValidationError("cwt_transform: num_scales must be >= 4");

    // Reflectively padded buffer: the original block sits in the middle of a
    // power-of-two buffer at least 3x the signal length, surrounded on both
    // sides by its mirror extension (no zero gaps anywhere).
    const std::size_t padded = next_pow2(3 * n);
    const std::size_t offset = (padded - n) / 2;
    std::vector<std::complex<double>> spectrum(padded);
    for (std::size_t j = 0; j < padded; ++j) {
        spectrum[j] = mirror_sample(
            signal, static_cast<long long>(j) - static_cast<long long>(offset));
    }
    fft_inplace(spectrum, false);

    Scalogram out;
    out.scales.resize(num_scales);
    const double lo = std::log(2.0);
    const double hi = std::log(static_cast<double>(n) / 4.0);
    for (int s = 0; s < num_scales; ++s) {
        const double t = num_scales == 1
                             ? 0.0
                             : static_cast<double>(s) / (num_scales - 1);
        out.scales[s] = std::exp(lo + t * (hi - lo));
    }
    out.positions.resize(n);
    std::iota(out.positions.begin(), out.positions.end(), std::size_t{0});
    out.magnitudes.assign(num_scales, std::vector<double>(n, 0.0));

    // Analytic Morlet response at angular frequency w (rad/sample) and
    // dilation a: exp(-(a*w - w0)^2 / 2) for w > 0, zero otherwise. With the
    // 1/a amplitude normalization the frequency-domain multiplier carries no
    // extra scale factor, so a pure tone peaks exactly at a = w0 / w.
    std::vector<std::complex<double>> row(padded);
    for (int s = 0; s < num_scales; ++s) {
        const double a = out.scales[s];
        for (std::size_t k = 0; k < padded; ++k) {
            // Angular frequency of FFT bin k; bins above Nyquist are the
            // negative frequencies, which the analytic wavelet discards.
            if (k == 0 || k > padded / 2) {
                row[k] = 0.0;
                continue;
            }
            const double w = 2.0 * M_PI * static_cast<double>(k) /
                             static_cast<double>(padded);
            const double d = a * w - kMorletCenterFrequency;
            row[k] = spectrum[k] * std::exp(-0.5 * d * d);
        }
        fft_inplace(row, true);
        for (std::size_t j = 0; j < n; ++j)
            out.magnitudes[s][j] = std::abs(row[offset + j]);
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Scalogram& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "scale";
    for (std::size_t p : s.positions) out << ",p" << p;
    out << "\n";
    char buf[48];
    for (std::size_t r = 0; r < s.magnitudes.size(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.9g", s.scales[r]);
        out << buf;
        for (double v : s.magnitudes[r]) {
            std::snprintf(buf, sizeof(buf), ",%.9g", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace rcs
