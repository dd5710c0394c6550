#pragma once

#include <cstdint>

#include "rcsclass/signatures.hpp"

namespace rcs {

struct NoiseSpec {
    double snr_db = 10.0;
    std::uint64_t seed = 0;
};

// Mean linear RCS of the signature: P = (1/N) * sum_i |sqrt(sigma_i)|^2.
double signal_power(const RcsSignature& sig);

// Noise variance calibrated to the signature's own power:
//   sigma_N^2 = P * 10^(-snr_db / 10).
double noise_power(const RcsSignature& sig, double snr_db);

// Corrupt a signature with circular complex white Gaussian noise in the
// amplitude domain.  Each sample becomes |sqrt(sigma_i) e^{j theta_i} + n_i|^2
// with theta_i uniform on [0, 2pi) and n_i complex normal with total variance
// sigma_N^2 (sigma_N^2 / 2 per quadrature).  Deterministic in spec.seed.
RcsSignature add_noise(const RcsSignature& sig, const NoiseSpec& spec);

}  // namespace rcs
