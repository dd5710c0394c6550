#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rcsclass/signatures.hpp"
#include "test_support.hpp"

using namespace rcs;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("rcs_sig_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("default grid is 0..358 in 2-degree steps") {
    const auto grid = default_grid();
    REQUIRE(grid.size() == 180);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 358.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] - grid[i - 1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dBsm conversion round-trips and hits known points") {
    CHECK(dbsm_to_m2(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbsm_to_m2(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m2_to_dbsm(1.0) == doctest::Approx(0.0).epsilon(1e-15));

    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    for (int i = 0; i < 1000; ++i) {
        const double db = u(eng);
        CHECK(testsup::close_rel(m2_to_dbsm(dbsm_to_m2(db)), db, 1e-12));
        const double lin = dbsm_to_m2(db);
        CHECK(testsup::close_rel(dbsm_to_m2(m2_to_dbsm(lin)), lin, 1e-12));
    }
}

TEST_CASE("single scattering center returns its RCS at every angle") {
    ScatteringCenterModel model;
    model.centers = {{4.0, 3.17, 42.0}};
    model.wavelength_m = 0.02;
    const auto grid = default_grid();
    const RcsSignature sig = synthesize_signature(model, grid);
    REQUIRE(sig.size() == grid.size());
    for (double v : sig.rcs_m2) CHECK(v == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("two equal centers a quarter-wavelength apart cancel") {
    // Both centers peak at offset 0, so at azimuth 90 deg the projected path
    // is just range_m; a quarter-wavelength range difference makes the
    // two-way phases differ by pi and the equal amplitudes cancel.
    ScatteringCenterModel model;
    const double lambda = 0.25;
    model.centers = {{1.0, 1.0, 0.0}, {1.0, 1.0 + lambda / 4.0, 0.0}};
    model.wavelength_m = lambda;
    const std::vector<double> angles = {90.0};
    const RcsSignature sig = synthesize_signature(model, angles);
    CHECK(sig.rcs_m2[0] < 1e-12);
}

TEST_CASE("many random centers average to the sum of center RCS") {
    // With ranges spanning many wavelengths the per-angle phases decorrelate,
    // so the angle-averaged coherent power approaches the incoherent sum.
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> ur(5.0, 50.0);
    std::uniform_real_distribution<double> uo(0.0, 360.0);
    std::uniform_real_distribution<double> us(0.5, 3.0);
    const double lambda = 0.02;

    std::vector<double> angles(181);
    for (int i = 0; i < 181; ++i) angles[i] = i * 360.0 / 181.0;

    double ratio_sum = 0.0;
    const int trials = 24;
    for (int t = 0; t < trials; ++t) {
        ScatteringCenterModel model;
        model.wavelength_m = lambda;
        double total = 0.0;
        for (int c = 0; c < 10; ++c) {
            ScatteringCenter sc{us(eng), ur(eng) * lambda, uo(eng)};
            total += sc.sigma_m2;
            model.centers.push_back(sc);
        }
        const RcsSignature sig = synthesize_signature(model, angles);
        ratio_sum += testsup::naive_mean(sig.rcs_m2) / total;
    }
    CHECK(ratio_sum / trials == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("synthesized RCS is non-negative for random models") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int t = 0; t < 50; ++t) {
        ScatteringCenterModel model;
        model.wavelength_m = u(eng) * 0.01;
        const int n = 1 + static_cast<int>(u(eng));
        for (int c = 0; c < n; ++c)
            model.centers.push_back({u(eng), u(eng), u(eng) * 36.0});
        const RcsSignature sig = synthesize_signature(model, default_grid());
        for (double v : sig.rcs_m2) {
            CHECK(v >= 0.0);
            CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("model and signature validation reject broken inputs") {
    ScatteringCenterModel empty;
    empty.wavelength_m = 0.02;
    CHECK_THROWS_AS(synthesize_signature(empty, default_grid()), ValidationError);

    RcsSignature sig;
    sig.target_id = "x";
    sig.frequency_ghz = 15.0;
    sig.angles_deg = {0.0, 2.0, 1.0};  // not increasing
    sig.rcs_m2 = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(sig.validate(), ValidationError);

    sig.angles_deg = {0.0, 1.0, 2.0};
    sig.rcs_m2 = {1.0, -1.0, 1.0};  // negative RCS
    CHECK_THROWS_AS(sig.validate(), ValidationError);

    sig.rcs_m2 = {1.0, 1.0};  // length mismatch
    CHECK_THROWS_AS(sig.validate(), ValidationError);
}

TEST_CASE("restrict_azimuth keeps the documented windows") {
    RcsSignature sig = testsup::random_signature(3);

    SUBCASE("60-degree half-width around 0 keeps 61 of 180 samples") {
        const RcsSignature win = restrict_azimuth(sig, 0.0, 60.0);
        CHECK(win.size() == 61);
    }
    SUBCASE("half-width 180 is the identity") {
        const RcsSignature win = restrict_azimuth(sig, 123.0, 180.0);
        REQUIRE(win.size() == sig.size());
        CHECK(win.angles_deg == sig.angles_deg);
        CHECK(win.rcs_m2 == sig.rcs_m2);
    }
    SUBCASE("tight window around 180 keeps 178, 180, 182") {
        const RcsSignature win = restrict_azimuth(sig, 180.0, 2.0);
        REQUIRE(win.size() == 3);
        CHECK(win.angles_deg[0] == 178.0);
        CHECK(win.angles_deg[1] == 180.0);
        CHECK(win.angles_deg[2] == 182.0);
    }
    SUBCASE("empty selection and out-of-range half-width throw") {
        CHECK_THROWS_AS(restrict_azimuth(sig, 1.0, 0.5), ValidationError);
        CHECK_THROWS_AS(restrict_azimuth(sig, 0.0, 0.0), ValidationError);
        CHECK_THROWS_AS(restrict_azimuth(sig, 0.0, 200.0), ValidationError);
    }
    SUBCASE("output is a subsequence and the window is idempotent") {
        const RcsSignature win = restrict_azimuth(sig, 40.0, 33.0);
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < win.size(); ++i) {
            while (cursor < sig.size() && sig.angles_deg[cursor] != win.angles_deg[i])
                ++cursor;
            REQUIRE(cursor < sig.size());
            CHECK(sig.rcs_m2[cursor] == win.rcs_m2[i]);
        }
        const RcsSignature again = restrict_azimuth(win, 40.0, 33.0);
        CHECK(again.angles_deg == win.angles_deg);
        CHECK(again.rcs_m2 == win.rcs_m2);
    }
}

TEST_CASE("CSV rows convert dBsm to linear on load") {
    const std::string path = temp_path("unit.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "target_id,frequency_ghz,polarization,angle_deg,rcs_dbsm\n";
        out << "DJI_M600,15,VV,0,0.0\n";
        out << "DJI_M600,15,VV,2,-10.0\n";
    }
    const Dataset d = load_csv(path);
    REQUIRE(d.signatures.size() == 1);
    CHECK(d.signatures[0].rcs_m2[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.signatures[0].rcs_m2[1] == doctest::Approx(0.1).epsilon(1e-12));
    fs::remove(path);
}

TEST_CASE("CSV round trip is byte identical") {
    FleetSpec spec;
    spec.num_classes = 3;
    spec.seed = 9;
    const Dataset fleet = generate_fleet(spec);

    const std::string a = temp_path("round_a.csv");
    const std::string b = temp_path("round_b.csv");
    save_csv(fleet, a);
    const Dataset reloaded = load_csv(a);
    save_csv(reloaded, b);
    CHECK(slurp(a) == slurp(b));
    CHECK(reloaded.class_names == fleet.class_names);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("CSV parse errors carry the line number") {
    const std::string path = temp_path("bad.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "target_id,frequency_ghz,polarization,angle_deg,rcs_dbsm\n";
        out << "uav01,15,VV,0,0.0\n";
        out << "uav01,15,VV,2,not_a_number\n";
    }
    try {
        load_csv(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    fs::remove(path);
}

TEST_CASE("CSV with non-increasing angles inside a block is rejected") {
    const std::string path = temp_path("unsorted.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "target_id,frequency_ghz,polarization,angle_deg,rcs_dbsm\n";
        out << "uav01,15,VV,0,0.0\n";
        out << "uav01,15,VV,4,0.0\n";
        out << "uav01,15,VV,2,0.0\n";  // wraps below the previous angle...
        out << "uav01,15,VV,1,0.0\n";  // ...but then breaks monotonicity again
    }
    CHECK_THROWS_AS(load_csv(path), ValidationError);
    fs::remove(path);
}

TEST_CASE("an angle wrap starts a new signature of the same target") {
    const std::string path = temp_path("blocks.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "target_id,frequency_ghz,polarization,angle_deg,rcs_dbsm\n";
        out << "uav01,15,VV,0,0.0\n";
        out << "uav01,15,VV,2,1.0\n";
        out << "uav01,15,VV,0,2.0\n";
        out << "uav01,15,VV,2,3.0\n";
    }
    const Dataset d = load_csv(path);
    REQUIRE(d.signatures.size() == 2);
    CHECK(d.signatures[0].size() == 2);
    CHECK(d.signatures[1].size() == 2);
    CHECK(d.class_names == std::vector<std::string>{"uav01"});
    fs::remove(path);
}

TEST_CASE("generate_fleet is deterministic and separated") {
    FleetSpec spec;
    spec.num_classes = 4;
    spec.separation_db = 10.0;
    spec.seed = 21;
    const Dataset a = generate_fleet(spec);
    const Dataset b = generate_fleet(spec);
    REQUIRE(a.signatures.size() == 4);
    CHECK(a.class_names.size() == 4);
    for (std::size_t i = 0; i < a.signatures.size(); ++i) {
        CHECK(a.signatures[i].rcs_m2 == b.signatures[i].rcs_m2);
        CHECK(a.signatures[i].target_id == b.signatures[i].target_id);
    }
    // Mean linear RCS grows with the class index when classes are separated.
    double prev = testsup::naive_mean(a.signatures[0].rcs_m2);
    for (std::size_t i = 1; i < a.signatures.size(); ++i) {
        const double cur = testsup::naive_mean(a.signatures[i].rcs_m2);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("dataset validation checks class name consistency") {
    Dataset d;
    d.signatures.push_back(testsup::random_signature(1));
    d.signatures[0].target_id = "a";
    d.class_names = {"b"};  // does not contain "a"
    CHECK_THROWS_AS(d.validate(), ValidationError);

    const Dataset ok = Dataset::from_signatures({d.signatures[0]});
    CHECK(ok.class_names == std::vector<std::string>{"a"});
    CHECK_NOTHROW(ok.validate());
}
