#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcsclass/errors.hpp"

namespace rcs {

enum class Polarization { vv, hh };

std::string to_string(Polarization p);
Polarization polarization_from_string(const std::string& s);

// Linear-power clamp floor used when converting to dB; anything at or below
// it is written as the -300 dBsm sentinel.
inline constexpr double kMinLinearRcs = 1e-30;

// Convert a linear radar cross section in m^2 to dBsm and back.
double m2_to_dbsm(double sigma_m2);
double dbsm_to_m2(double dbsm);

// One measured (or synthesized) RCS-vs-azimuth trace for a single target at a
// single frequency and polarization.  RCS is stored linearly in m^2; dB is a
// presentation/file format only.
struct RcsSignature {
    std::string target_id;
    double frequency_ghz = 0.0;
    Polarization polarization = Polarization::vv;
    std::vector<double> angles_deg;  // strictly increasing
    std::vector<double> rcs_m2;      // same length, each >= 0 and finite

    std::size_t size() const { return angles_deg.size(); }

    // Throws ValidationError when any structural invariant is broken.
    void validate() const;
};

// Default measurement grid: 0..358 degrees in 2-degree steps (180 samples).
std::vector<double> default_grid(double step_deg = 2.0);

// Point-scatterer description of a target.  Each center has a mean RCS, a
// nominal range offset from the rotation axis, and the azimuth at which that
// offset is largest.
struct ScatteringCenter {
    double sigma_m2 = 0.0;          // mean RCS of the center, m^2, > 0
    double range_m = 0.0;           // radial offset, m
    double angle_offset_deg = 0.0;  // azimuth of maximum projected range
};

struct ScatteringCenterModel {
    std::vector<ScatteringCenter> centers;
    double wavelength_m = 0.0;  // > 0

    void validate() const;
};

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Free-space wavelength for a carrier frequency in GHz.
double wavelength_m_for_ghz(double frequency_ghz);

// Coherent sum over centers: at azimuth phi the model's return is
//   rcs(phi) = | sum_i sqrt(sigma_i) * exp(j * 4*pi * R_i(phi) / lambda) |^2
// with the projected two-way path R_i(phi) = r_i * (1 + cos(phi - phi_i)).
// Purely deterministic geometry; `seed` is reserved for future stochastic
// extensions and does not affect the output.
RcsSignature synthesize_signature(const ScatteringCenterModel& model,
                                  std::span<const double> angles_deg,
                                  std::uint64_t seed = 0,
                                  const std::string& target_id = "synthetic",
                                  Polarization polarization = Polarization::vv);

// Keep only samples whose angle lies within +/- half_width_deg of center_deg,
// comparing on the circle (wrap at 360).  Angles are preserved as stored.
RcsSignature restrict_azimuth(const RcsSignature& sig, double center_deg,
                              double half_width_deg);

// A labeled signature collection.  class_names is the sorted set of distinct
// target ids; every signature's target_id must be present.
struct Dataset {
    std::vector<RcsSignature> signatures;
    std::vector<std::string> class_names;

    void validate() const;

    // Build from signatures, deriving class_names (sorted, unique).
    static Dataset from_signatures(std::vector<RcsSignature> sigs);
};

// CSV persistence.  Columns: target_id,frequency_ghz,polarization,angle_deg,
// rcs_dbsm.  Values are written with %.6f.  Consecutive rows with the same
// (target_id, frequency_ghz, polarization) and increasing angle form one
// signature; the angle wrapping back to the block's first angle starts the
// next signature of the same target.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& dataset, const std::string& path);

// Synthetic multi-class fleet used by the `gen` command and the experiment
// harness.  Class c receives `centers` random scattering centers whose total
// mean RCS is base_sigma_m2 * 10^(c * separation_db / 10), so consecutive
// classes are separated by separation_db decibels.
struct FleetSpec {
    int num_classes = 6;
    int centers_per_class = 8;
    double separation_db = 6.0;
    double base_sigma_m2 = 1.0;
    double frequency_ghz = 15.0;
    Polarization polarization = Polarization::vv;
    double grid_step_deg = 2.0;
    std::uint64_t seed = 0;

    void validate() const;
};

Dataset generate_fleet(const FleetSpec& spec);

// The scattering-center models behind generate_fleet, for callers that need
// to resynthesize (e.g. fresh noisy test copies share the clean geometry).
std::vector<ScatteringCenterModel> fleet_models(const FleetSpec& spec);

}  // namespace rcs
