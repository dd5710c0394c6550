#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcsclass/noise.hpp"
#include "rcsclass/rng.hpp"
#include "test_support.hpp"

using namespace rcs;

namespace {

RcsSignature constant_signature(double value, std::size_t n = 180) {
    RcsSignature sig;
    sig.target_id = "const";
    sig.frequency_ghz = 15.0;
    for (std::size_t i = 0; i < n; ++i) {
        sig.angles_deg.push_back(i * 2.0);
        sig.rcs_m2.push_back(value);
    }
    return sig;
}

// A signature that is zero everywhere except its first sample.  The nonzero
// sample pins the signal power, and every zero sample turns into a direct
// observation |n|^2 of the injected noise, so the noise power is measurable
// through the public interface alone.
RcsSignature spike_signature(double total_power, std::size_t n = 180) {
    RcsSignature sig = constant_signature(0.0, n);
    sig.rcs_m2[0] = total_power * static_cast<double>(n);
    return sig;
}

// Mean observed |n|^2 over `draws` zero-signal samples at the given SNR,
// where the spike keeps the per-signature power at `power`.
double measured_noise_power(double power, double snr_db, std::size_t draws,
                            std::uint64_t seed) {
    const RcsSignature base = spike_signature(power);
    double sum = 0.0;
    std::size_t count = 0;
    std::uint64_t s = seed;
    while (count < draws) {
        const RcsSignature noisy = add_noise(base, NoiseSpec{snr_db, s++});
        for (std::size_t i = 1; i < noisy.size() && count < draws; ++i) {
            sum += noisy.rcs_m2[i];
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace

TEST_CASE("signal power is the mean linear RCS") {
    RcsSignature sig = constant_signature(1.0, 3);
    CHECK(signal_power(sig) == doctest::Approx(1.0).epsilon(1e-15));

    sig.rcs_m2 = {0.0, 2.0};
    sig.angles_deg = {0.0, 2.0};
    CHECK(signal_power(sig) == doctest::Approx(1.0).epsilon(1e-15));

    const RcsSignature r = testsup::random_signature(7);
    CHECK(signal_power(r) == doctest::Approx(testsup::naive_mean(r.rcs_m2)).epsilon(1e-14));
}

TEST_CASE("noise power follows the SNR calibration rule") {
    const RcsSignature unit = constant_signature(1.0);
    CHECK(noise_power(unit, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(noise_power(unit, 10.0) == doctest::Approx(0.1).epsilon(1e-12));

    const RcsSignature s25 = constant_signature(2.5);
    CHECK(noise_power(s25, -5.0) ==
          doctest::Approx(2.5 * std::pow(10.0, 0.5)).epsilon(1e-12));
}

TEST_CASE("very high SNR leaves the signature almost untouched") {
    const RcsSignature sig = testsup::random_signature(13);
    const RcsSignature noisy = add_noise(sig, NoiseSpec{200.0, 4});
    REQUIRE(noisy.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(testsup::close_rel(noisy.rcs_m2[i], sig.rcs_m2[i], 1e-6));
}

TEST_CASE("zero-signal samples observe the injected noise power directly") {
    // Spike power 1 at SNR 0 dB makes the injected variance exactly 1; the
    // mean of the zero samples' outputs estimates it.
    const double mean = measured_noise_power(1.0, 0.0, 100000, 300);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("noise injection is deterministic per seed") {
    const RcsSignature sig = testsup::random_signature(23);
    const RcsSignature a = add_noise(sig, NoiseSpec{3.0, 99});
    const RcsSignature b = add_noise(sig, NoiseSpec{3.0, 99});
    CHECK(a.rcs_m2 == b.rcs_m2);
    const RcsSignature c = add_noise(sig, NoiseSpec{3.0, 100});
    CHECK(a.rcs_m2 != c.rcs_m2);
}

TEST_CASE("noisy RCS is always non-negative") {
    const RcsSignature sig = testsup::random_signature(29);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const RcsSignature noisy = add_noise(sig, NoiseSpec{-10.0, s});
        for (double v : noisy.rcs_m2) {
            CHECK(v >= 0.0);
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("empirical SNR tracks the request within 0.2 dB") {
    for (double snr : {-5.0, 0.0, 10.0}) {
        const double sigma2 = std::pow(10.0, -snr / 10.0);  // power 1 spike
        const double measured = measured_noise_power(1.0, snr, 20000, 77);
        const double err_db = std::fabs(10.0 * std::log10(measured / sigma2));
        CHECK(err_db < 0.2);
    }
}
