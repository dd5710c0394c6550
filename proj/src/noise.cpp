#include "rcsclass/noise.hpp"

#include <cmath>
#include <complex>

#include "rcsclass/rng.hpp"

namespace rcs {

double signal_power(const RcsSignature& sig) {
    sig.validate();
    double acc = 0.0;
    for (double v : sig.rcs_m2) acc += v;
    return acc / static_cast<double>(sig.size());
}

double noise_power(const RcsSignature& sig, double snr_db) {
    if (!std::isfinite(snr_db)) throw ValidationError("SNR must be finite");
    return signal_power(sig) * std::pow(10.0, -snr_db / 10.0);
}

RcsSignature add_noise(const RcsSignature& sig, const NoiseSpec& spec) {
    const double var = noise_power(sig, spec.snr_db);
    const double quad_sd = std::sqrt(var / 2.0);
    Rng rng(spec.seed);
    RcsSignature out = sig;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        const auto [z1, z2] = rng.normal_pair();
        const std::complex<double> a =
            std::sqrt(sig.rcs_m2[i]) * std::exp(std::complex<double>(0.0, theta));
        const std::complex<double> n(quad_sd * z1, quad_sd * z2);
        out.rcs_m2[i] = std::norm(a + n);
    }
    return out;
}

}  // namespace rcs
