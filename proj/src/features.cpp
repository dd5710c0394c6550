#include "rcsclass/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace rcs {

std::string to_string(FeatureScale s) {
    return s == FeatureScale::linear ? "linear" : "dbsm";
}

FeatureScale feature_scale_from_string(const std::string& s) {
    if (s == "linear") return FeatureScale::linear;
    if (s == "dbsm" || s == "db") return FeatureScale::dbsm;
    throw ValidationError("unknown feature scale '" + s + "'");
}

const std::array<const char*, 8>& FeatureVector::names() {
    static const std::array<const char*, 8> n = {
        "peak", "rms", "mean", "std", "variance", "median", "mode", "minimum"};
    return n;
}

std::vector<double> FeatureVector::values() const {
    std::vector<double> v = {peak, rms, mean, std_dev, variance, median, mode};
    if (minimum) v.push_back(*minimum);
    return v;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Most frequent value after quantisation into 0.1 dB bins.  Ties go to the
// lowest bin, and the reported mode is the smallest sample inside the winning
// bin (so a constant signature's mode is exactly that constant).  `scaled`
// carries the samples on the output scale, parallel to `db`.
double mode_binned(const std::vector<double>& db, const std::vector<double>& scaled) {
    struct Bin {
        int count = 0;
        double lowest = 0.0;
    };
    std::map<long long, Bin> bins;
    for (std::size_t i = 0; i < db.size(); ++i) {
        auto [it, fresh] = bins.try_emplace(std::llround(db[i] * 10.0));
        if (fresh || scaled[i] < it->second.lowest) it->second.lowest = scaled[i];
        it->second.count += 1;
    }
    int best_count = 0;
    double mode = 0.0;
    for (const auto& [key, bin] : bins) {
        if (bin.count > best_count) {  // map iterates in ascending bin order
            best_count = bin.count;
            mode = bin.lowest;
        }
    }
    return mode;
}

}  // namespace

FeatureVector extract_features(const RcsSignature& sig, FeatureScale scale,
                               bool include_minimum) {
    sig.validate();
    std::vector<double> x;
    x.reserve(sig.size());
    if (scale == FeatureScale::dbsm) {
        for (double v : sig.rcs_m2) x.push_back(m2_to_dbsm(v));
    } else {
        x = sig.rcs_m2;
    }

    const std::size_t n = x.size();
    FeatureVector f;
    f.peak = *std::max_element(x.begin(), x.end());
    long double sum = 0.0L, sq = 0.0L;
    for (double v : x) {
        sum += v;
        sq += static_cast<long double>(v) * v;
    }
    f.rms = std::sqrt(static_cast<double>(sq / n));
    f.mean = static_cast<double>(sum / n);
    long double dev = 0.0L;
    for (double v : x) {
        const double d = v - f.mean;
        dev += static_cast<long double>(d) * d;
    }
    f.variance = static_cast<double>(dev / n);
    f.std_dev = n > 1 ? std::sqrt(static_cast<double>(dev / (n - 1))) : 0.0;
    f.median = median_of(x);

    // The mode is always binned on the decibel axis, where the 0.1 dB bin
    // width is meaningful across the huge dynamic range of RCS.
    std::vector<double> db(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) db[i] = m2_to_dbsm(sig.rcs_m2[i]);
    f.mode = mode_binned(db, x);

    if (include_minimum) f.minimum = *std::min_element(x.begin(), x.end());
    return f;
}

void save_features_csv(const std::vector<std::pair<std::string, FeatureVector>>& rows,
                       const std::string& path) {
    if (rows.empty()) throw ValidationError("no feature rows to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    const bool with_min = rows.front().second.minimum.has_value();
    for (const auto& r : rows)
        if (r.second.minimum.has_value() != with_min)
            throw ValidationError("feature rows disagree on the minimum column");
    out << "target_id,peak,rms,mean,std,variance,median,mode";
    if (with_min) out << ",minimum";
    out << "\n";
    char buf[64];
    for (const auto& [id, f] : rows) {
        out << id;
        for (double v : f.values()) {
            std::snprintf(buf, sizeof(buf), ",%.6f", v);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

}  // namespace rcs
