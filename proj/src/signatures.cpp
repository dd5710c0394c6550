#include "rcsclass/signatures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rcsclass/rng.hpp"

namespace rcs {

std::string to_string(Polarization p) {
    return p == Polarization::vv ? "VV" : "HH";
}

Polarization polarization_from_string(const std::string& s) {
    if (s == "VV" || s == "vv") return Polarization::vv;
    if (s == "HH" || s == "hh") return Polarization::hh;
    throw ValidationError("unknown polarization '" + s + "' (expected VV or HH)");
}

double m2_to_dbsm(double sigma_m2) {
    if (!(sigma_m2 >= 0.0) || !std::isfinite(sigma_m2))
        throw ValidationError("RCS must be finite and non-negative");
    if (sigma_m2 <= kMinLinearRcs) return -300.0;
    return 10.0 * std::log10(sigma_m2);
}

double dbsm_to_m2(double dbsm) {
    if (!std::isfinite(dbsm)) throw ValidationError("dBsm value must be finite");
    return std::pow(10.0, dbsm / 10.0);
}

void RcsSignature::validate() const {
    if (target_id.empty()) throw ValidationError("signature target_id is empty");
    if (!(frequency_ghz > 0.0) || !std::isfinite(frequency_ghz))
        throw ValidationError("signature frequency must be positive");
    if (angles_deg.size() != rcs_m2.size())
        throw ValidationError("signature angle/rcs length mismatch");
    if (angles_deg.empty()) throw ValidationError("signature is empty");
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        if (!std::isfinite(angles_deg[i]))
            throw ValidationError("signature angle is not finite");
        if (i > 0 && !(angles_deg[i] > angles_deg[i - 1]))
            throw ValidationError("signature angles must be strictly increasing");
        if (!std::isfinite(rcs_m2[i]) || rcs_m2[i] < 0.0)
            throw ValidationError("signature RCS values must be finite and >= 0");
    }
}

std::vector<double> default_grid(double step_deg) {
    if (!(step_deg > 0.0) || step_deg >= 360.0)
        throw ValidationError("grid step must be in (0, 360)");
    std::vector<double> grid;
    for (double a = 0.0; a < 360.0 - 1e-9; a += step_deg) grid.push_back(a);
    return grid;
}

void ScatteringCenterModel::validate() const {
    if (centers.empty()) throw ValidationError("scattering model has no centers");
    if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m))
        throw ValidationError("wavelength must be positive");
    for (const auto& c : centers) {
        if (!(c.sigma_m2 > 0.0) || !std::isfinite(c.sigma_m2))
            throw ValidationError("scattering center RCS must be positive");
        if (!std::isfinite(c.range_m) || !std::isfinite(c.angle_offset_deg))
            throw ValidationError("scattering center geometry must be finite");
    }
}

double wavelength_m_for_ghz(double frequency_ghz) {
    if (!(frequency_ghz > 0.0)) throw ValidationError("frequency must be positive");
    return kSpeedOfLight / (frequency_ghz * 1e9);
}

RcsSignature synthesize_signature(const ScatteringCenterModel& model,
                                  std::span<const double> angles_deg,
                                  std::uint64_t /*seed*/,
                                  const std::string& target_id,
                                  Polarization polarization) {
    model.validate();
    if (angles_deg.empty()) throw ValidationError("no synthesis angles given");
    RcsSignature sig;
    sig.target_id = target_id;
    sig.frequency_ghz = kSpeedOfLight / model.wavelength_m / 1e9;
    sig.polarization = polarization;
    sig.angles_deg.assign(angles_deg.begin(), angles_deg.end());
    sig.rcs_m2.resize(angles_deg.size());
    const double k4pi = 4.0 * M_PI / model.wavelength_m;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double phi = angles_deg[i] * M_PI / 180.0;
        std::complex<double> field(0.0, 0.0);
        for (const auto& c : model.centers) {
            const double phi_c = c.angle_offset_deg * M_PI / 180.0;
            const double path = c.range_m * (1.0 + std::cos(phi - phi_c));
            field += std::sqrt(c.sigma_m2) *
                     std::exp(std::complex<double>(0.0, k4pi * path));
        }
        sig.rcs_m2[i] = std::norm(field);
    }
    sig.validate();
    return sig;
}

RcsSignature restrict_azimuth(const RcsSignature& sig, double center_deg,
                              double half_width_deg) {
    sig.validate();
    if (!(half_width_deg > 0.0) || half_width_deg > 180.0)
        throw ValidationError("azimuth half-width must be in (0, 180]");
    RcsSignature out;
    out.target_id = sig.target_id;
    out.frequency_ghz = sig.frequency_ghz;
    out.polarization = sig.polarization;
    for (std::size_t i = 0; i < sig.size(); ++i) {
        // Circular distance between the sample angle and the window center.
        double d = std::fmod(std::fabs(sig.angles_deg[i] - center_deg), 360.0);
        if (d > 180.0) d = 360.0 - d;
        if (d <= half_width_deg + 1e-9) {
            out.angles_deg.push_back(sig.angles_deg[i]);
            out.rcs_m2.push_back(sig.rcs_m2[i]);
        }
    }
    if (out.angles_deg.empty())
        throw ValidationError("azimuth window selects no samples");
    return out;
}

void Dataset::validate() const {
    if (signatures.empty()) throw ValidationError("dataset has no signatures");
    std::set<std::string> names(class_names.begin(), class_names.end());
    if (names.size() != class_names.size())
        throw ValidationError("dataset class names contain duplicates");
    if (!std::is_sorted(class_names.begin(), class_names.end()))
        throw ValidationError("dataset class names must be sorted");
    for (const auto& s : signatures) {
        s.validate();
        if (!names.count(s.target_id))
            throw ValidationError("signature target '" + s.target_id +
                                  "' missing from class names");
    }
}

Dataset Dataset::from_signatures(std::vector<RcsSignature> sigs) {
    Dataset d;
    d.signatures = std::move(sigs);
    std::set<std::string> names;
    for (const auto& s : d.signatures) names.insert(s.target_id);
    d.class_names.assign(names.begin(), names.end());
    d.validate();
    return d;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const char* what, long line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + what + " '" + s + "'", line_no);
    }
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file: " + path);
    {
        auto header = split_fields(line);
        const std::vector<std::string> expected = {
            "target_id", "frequency_ghz", "polarization", "angle_deg", "rcs_dbsm"};
        if (header != std::vector<std::string>(expected.begin(), expected.end()))
            throw ParseError("bad CSV header in " + path, 1);
    }

    std::vector<RcsSignature> sigs;
    RcsSignature cur;
    bool open_block = false;
    double block_first_angle = 0.0;
    long line_no = 1;

    auto flush = [&] {
        if (open_block) {
            cur.validate();
            sigs.push_back(std::move(cur));
            cur = RcsSignature{};
            open_block = false;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto f = split_fields(line);
        if (f.size() != 5) throw ParseError("expected 5 fields", line_no);
        const std::string& id = f[0];
        if (id.empty()) throw ParseError("empty target_id", line_no);
        const double freq = parse_double(f[1], "frequency_ghz", line_no);
        Polarization pol;
        try {
            pol = polarization_from_string(f[2]);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no);
        }
        const double angle = parse_double(f[3], "angle_deg", line_no);
        const double dbsm = parse_double(f[4], "rcs_dbsm", line_no);

        const bool same_identity = open_block && id == cur.target_id &&
                                   freq == cur.frequency_ghz &&
                                   pol == cur.polarization;
        if (same_identity && angle > cur.angles_deg.back()) {
            cur.angles_deg.push_back(angle);
            cur.rcs_m2.push_back(dbsm_to_m2(dbsm));
            continue;
        }
        if (same_identity && angle != block_first_angle) {
            // A decrease that is not a clean wrap to the block start is a
            // corrupt ordering, not a new signature.
            throw ParseError("angles within a signature must increase", line_no);
        }
        flush();
        cur.target_id = id;
        cur.frequency_ghz = freq;
        cur.polarization = pol;
        cur.angles_deg = {angle};
        cur.rcs_m2 = {dbsm_to_m2(dbsm)};
        block_first_angle = angle;
        open_block = true;
    }
    flush();
    if (sigs.empty()) throw ParseError("no data rows in " + path);
    return Dataset::from_signatures(std::move(sigs));
}

void save_csv(const Dataset& dataset, const std::string& path) {
    dataset.validate();
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << "target_id,frequency_ghz,polarization,angle_deg,rcs_dbsm\n";
    char buf[160];
    for (const auto& s : dataset.signatures) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%s,%.6f,%s,%.6f,%.6f\n",
                          s.target_id.c_str(), s.frequency_ghz,
                          to_string(s.polarization).c_str(), s.angles_deg[i],
                          m2_to_dbsm(s.rcs_m2[i]));
            out << buf;
        }
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

void FleetSpec::validate() const {
    if (num_classes < 1) throw ValidationError("fleet needs at least one class");
    if (centers_per_class < 1) throw ValidationError("fleet centers per class must be >= 1");
    if (!(base_sigma_m2 > 0.0)) throw ValidationError("fleet base RCS must be positive");
    if (!(separation_db >= 0.0)) throw ValidationError("fleet separation must be >= 0 dB");
    if (!(frequency_ghz > 0.0)) throw ValidationError("fleet frequency must be positive");
    if (!(grid_step_deg > 0.0) || grid_step_deg >= 360.0)
        throw ValidationError("fleet grid step must be in (0, 360)");
}

std::vector<ScatteringCenterModel> fleet_models(const FleetSpec& spec) {
    spec.validate();
    const double lambda = wavelength_m_for_ghz(spec.frequency_ghz);
    std::vector<ScatteringCenterModel> models;
    models.reserve(spec.num_classes);
    Rng root(derive_seed(spec.seed, 0x666c6565ULL));  // fleet-geometry stream
    for (int c = 0; c < spec.num_classes; ++c) {
        Rng rng = root.fork(static_cast<std::uint64_t>(c));
        ScatteringCenterModel m;
        m.wavelength_m = lambda;
        const double total = spec.base_sigma_m2 *
                             std::pow(10.0, c * spec.separation_db / 10.0);
        // Random positive weights normalised to the class total, plus
        // geometry spread over a few dozen wavelengths so the azimuth pattern
        // has structure at the default grid resolution.
        std::vector<double> w(spec.centers_per_class);
        double wsum = 0.0;
        for (auto& wi : w) {
            wi = 0.2 + rng.uniform();
            wsum += wi;
        }
        for (int i = 0; i < spec.centers_per_class; ++i) {
            ScatteringCenter sc;
            sc.sigma_m2 = total * w[i] / wsum;
            sc.range_m = rng.uniform(2.0, 60.0) * lambda;
            sc.angle_offset_deg = rng.uniform(0.0, 360.0);
            m.centers.push_back(sc);
        }
        models.push_back(std::move(m));
    }
    return models;
}

Dataset generate_fleet(const FleetSpec& spec) {
    auto models = fleet_models(spec);
    const auto grid = default_grid(spec.grid_step_deg);
    std::vector<RcsSignature> sigs;
    sigs.reserve(models.size());
    for (std::size_t c = 0; c < models.size(); ++c) {
        char name[16];
        std::snprintf(name, sizeof(name), "uav%02zu", c + 1);
        sigs.push_back(synthesize_signature(models[c], grid, 0, name,
                                            spec.polarization));
        // Wavelength round-trips through frequency with rounding error; pin
        // the requested value so files carry exactly what the user asked for.
        sigs.back().frequency_ghz = spec.frequency_ghz;
    }
    return Dataset::from_signatures(std::move(sigs));
}

}  // namespace rcs
