// End-to-end tests for the rcsclass command-line tool.  The binary under
// test is located via the RCS_CLI_PATH environment variable (set by CTest);
// each case spawns it with std::system, captures stdout/stderr into a
// scratch directory, and checks files, output contracts, and exit codes.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
#ifdef RCS_CLI_PATH
    const std::string p = RCS_CLI_PATH;
#else
    const char* env = std::getenv("RCS_CLI_PATH");
    REQUIRE_MESSAGE(env != nullptr,
                    "RCS_CLI_PATH must point at the rcsclass binary");
    const std::string p = env;
#endif
    REQUIRE(fs::exists(p));
    return p;
}

// Fresh scratch directory for one test case (wiped if it already exists).
fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("rcsclass_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("cannot open " + path.string()).c_str());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Run `rcsclass <args>`, capturing the streams under `dir` with a unique tag.
RunResult run_cli(const std::string& args, const fs::path& dir,
                  const std::string& tag) {
    const fs::path out_file = dir / (tag + ".stdout");
    const fs::path err_file = dir / (tag + ".stderr");
    const std::string cmd = "'" + cli_path() + "' " + args + " > '" +
                            out_file.string() + "' 2> '" + err_file.string() +
                            "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// Shorthand: generate a small fleet CSV and return its path.
fs::path make_fleet(const fs::path& dir, const std::string& tag,
                    const std::string& extra_args) {
    const fs::path out = dir / tag;
    const RunResult r = run_cli(
        "gen --out '" + out.string() + "' " + extra_args, dir, "gen_" + tag);
    REQUIRE_MESSAGE(r.exit_code == 0, r.err.c_str());
    const fs::path fleet = out / "fleet.csv";
    REQUIRE(fs::exists(fleet));
    return fleet;
}

}  // namespace

TEST_CASE("help text and missing subcommand map to the right exit codes") {
    const fs::path dir = scratch_dir("help");

    const RunResult help = run_cli("--help", dir, "help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.out, "gen"));
    CHECK(contains(help.out, "train"));
    CHECK(contains(help.out, "classify"));
    CHECK(contains(help.out, "sweep"));
    CHECK(contains(help.out, "bench"));
    CHECK(contains(help.out, "scalogram"));
    CHECK(contains(help.out, "hyperopt"));

    const RunResult sub_help = run_cli("gen --help", dir, "gen_help");
    CHECK(sub_help.exit_code == 0);
    CHECK(contains(sub_help.out, "--classes"));
    CHECK(contains(sub_help.out, "--seed"));

    // A subcommand is required; a bare invocation is a usage error.
    const RunResult bare = run_cli("", dir, "bare");
    CHECK(bare.exit_code == 2);

    const RunResult unknown = run_cli("frobnicate", dir, "unknown");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("gen writes a deterministic fleet plus the effective config") {
    const fs::path dir = scratch_dir("gen");
    const fs::path a = dir / "a";
    const fs::path b = dir / "b";
    const fs::path c = dir / "c";

    const std::string flags = "gen --seed 11 --classes 4 --out '";
    const RunResult ra = run_cli(flags + a.string() + "'", dir, "a");
    REQUIRE_MESSAGE(ra.exit_code == 0, ra.err.c_str());
    CHECK(contains(ra.out, "wrote"));
    CHECK(contains(ra.out, "(4 classes, 4 signatures)"));

    REQUIRE(fs::exists(a / "fleet.csv"));
    REQUIRE(fs::exists(a / "effective_config.toml"));

    const std::string fleet_a = slurp(a / "fleet.csv");
    // Header plus 4 signatures x 180 grid angles.
    CHECK(line_count(fleet_a) == 1 + 4 * 180);
    CHECK(fleet_a.rfind("target_id,frequency_ghz,polarization,angle_deg,"
                        "rcs_dbsm\n",
                        0) == 0);
    CHECK(!contains(fleet_a, "\r"));
    CHECK(contains(fleet_a, "uav01"));
    CHECK(contains(fleet_a, "uav04"));

    // The effective config records what this run used.
    const std::string cfg = slurp(a / "effective_config.toml");
    CHECK(!cfg.empty());
    CHECK(contains(cfg, "classes"));

    // Same seed reproduces the file byte for byte; a new seed does not.
    const RunResult rb = run_cli(flags + b.string() + "'", dir, "b");
    REQUIRE(rb.exit_code == 0);
    CHECK(slurp(b / "fleet.csv") == fleet_a);

    const RunResult rc = run_cli(
        "gen --seed 12 --classes 4 --out '" + c.string() + "'", dir, "c");
    REQUIRE(rc.exit_code == 0);
    CHECK(slurp(c / "fleet.csv") != fleet_a);
}

TEST_CASE("invalid inputs exit with code 2 and an error message") {
    const fs::path dir = scratch_dir("errors");

    // Domain validation failure (needs at least two classes).
    const RunResult one_class = run_cli(
        "gen --classes 1 --out '" + (dir / "x").string() + "'", dir, "one");
    CHECK(one_class.exit_code == 2);
    CHECK(contains(one_class.err, "error"));

    // Missing model file is caught by option validation.
    const RunResult no_model = run_cli(
        "classify --model '" + (dir / "nope.json").string() + "' --data '" +
            (dir / "nope.csv").string() + "'",
        dir, "nomodel");
    CHECK(no_model.exit_code == 2);

    const fs::path fleet = make_fleet(dir, "g", "--seed 1 --classes 3");

    // Unknown model family name.
    const RunResult bad_family = run_cli(
        "train --data '" + fleet.string() + "' --family nosuchfamily --out '" +
            (dir / "t").string() + "'",
        dir, "family");
    CHECK(bad_family.exit_code == 2);
    CHECK(contains(bad_family.err, "error"));

    // Unsupported scalogram output size.
    const RunResult bad_size = run_cli(
        "scalogram --data '" + fleet.string() + "' --size 100 --out '" +
            (dir / "s").string() + "'",
        dir, "size");
    CHECK(bad_size.exit_code == 2);
}

TEST_CASE("train then classify labels the generating fleet correctly") {
    const fs::path dir = scratch_dir("pipeline");
    const fs::path fleet = make_fleet(dir, "g", "--seed 7 --classes 3");
    const fs::path model_dir = dir / "m";

    const RunResult tr = run_cli("train --data '" + fleet.string() +
                                     "' --family swerling12 --seed 7 --out '" +
                                     model_dir.string() + "'",
                                 dir, "train");
    REQUIRE_MESSAGE(tr.exit_code == 0, tr.err.c_str());
    CHECK(contains(tr.out, "wrote"));
    CHECK(contains(tr.out, "3 classes"));
    const fs::path model = model_dir / "model.json";
    REQUIRE(fs::exists(model));
    CHECK(contains(slurp(model), "swerling12"));

    const RunResult cl = run_cli("classify --model '" + model.string() +
                                     "' --data '" + fleet.string() + "' --out '" +
                                     (dir / "c").string() + "'",
                                 dir, "classify");
    REQUIRE_MESSAGE(cl.exit_code == 0, cl.err.c_str());

    const std::vector<std::string> rows = lines_of(cl.out);
    REQUIRE(rows.size() == 3);
    for (const std::string& row : rows) {
        const std::size_t arrow = row.find(" -> ");
        REQUIRE(arrow != std::string::npos);
        const std::string id = row.substr(0, arrow);
        std::string rest = row.substr(arrow + 4);
        const std::size_t bracket = rest.find("  [");
        REQUIRE(bracket != std::string::npos);
        const std::string label = rest.substr(0, bracket);
        // Classifying a noise-free training signature must recover its class.
        CHECK(label == id);
        // Per-class scores are listed as name=value pairs.
        CHECK(contains(rest, "="));
        CHECK(rest.back() == ']');
    }
    CHECK(contains(cl.out, "uav01"));
    CHECK(contains(cl.out, "uav02"));
    CHECK(contains(cl.out, "uav03"));
}

TEST_CASE("sweep writes the report bundle and is seed-deterministic") {
    const fs::path dir = scratch_dir("sweep");
    const fs::path fleet =
        make_fleet(dir, "g", "--seed 3 --classes 3 --separation-db 10");

    const std::string sweep_flags =
        "sweep --data '" + fleet.string() +
        "' --classifiers swerling12,knn --snr -5,5 --runs 2 --tests 3 "
        "--train-copies 10 --seed 3 --out '";
    const fs::path r1 = dir / "r1";
    const RunResult s1 = run_cli(sweep_flags + r1.string() + "'", dir, "s1");
    REQUIRE_MESSAGE(s1.exit_code == 0, s1.err.c_str());
    CHECK(contains(s1.out, "wrote report.json"));

    REQUIRE(fs::exists(r1 / "report.json"));
    CHECK(contains(slurp(r1 / "report.json"), "rcsclass-report"));

    const std::string acc = slurp(r1 / "accuracy_vs_snr.csv");
    CHECK(acc.rfind("classifier,snr_db,accuracy_mean,accuracy_std,failed\n",
                    0) == 0);
    CHECK(line_count(acc) == 1 + 2 * 2);  // two classifiers x two SNRs

    const std::string box = slurp(r1 / "boxplot.csv");
    CHECK(box.rfind("classifier,snr_db,min,q1,median,q3,max,outliers\n", 0) ==
          0);
    CHECK(line_count(box) == 1 + 2 * 2);

    const std::string timing = slurp(r1 / "timing.csv");
    CHECK(timing.rfind("classifier,mean_ms,std_ms,median_ms\n", 0) == 0);
    CHECK(line_count(timing) == 1 + 2);

    for (const char* name :
         {"confusion_swerling12_-5.csv", "confusion_swerling12_5.csv",
          "confusion_knn_-5.csv", "confusion_knn_5.csv"}) {
        REQUIRE_MESSAGE(fs::exists(r1 / name), name);
        const std::string conf = slurp(r1 / name);
        CHECK(conf.rfind("true_class,uav01,uav02,uav03\n", 0) == 0);
        CHECK(line_count(conf) == 1 + 3);
    }

    // Outcome artifacts are reproducible for a fixed seed.  (report.json and
    // timing.csv embed wall-clock measurements, so they are exempt.)
    const fs::path r2 = dir / "r2";
    const RunResult s2 = run_cli(sweep_flags + r2.string() + "'", dir, "s2");
    REQUIRE(s2.exit_code == 0);
    CHECK(slurp(r2 / "accuracy_vs_snr.csv") == acc);
    CHECK(slurp(r2 / "boxplot.csv") == box);
    CHECK(slurp(r2 / "confusion_knn_5.csv") ==
          slurp(r1 / "confusion_knn_5.csv"));
}

TEST_CASE("bench writes a timing table for the requested engines") {
    const fs::path dir = scratch_dir("bench");
    const fs::path fleet = make_fleet(dir, "g", "--seed 5 --classes 3");
    const fs::path out = dir / "b";

    const RunResult r = run_cli(
        "bench --data '" + fleet.string() +
            "' --classifiers swerling12,tree --reps 3 --test-copies 2 "
            "--train-copies 10 --out '" +
            out.string() + "'",
        dir, "bench");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err.c_str());

    const std::string csv = slurp(out / "timing.csv");
    CHECK(csv.rfind("classifier,total_mean_ms,total_std_ms,total_median_ms,"
                    "extract_mean_ms,extract_std_ms,extract_median_ms,"
                    "predict_mean_ms,predict_std_ms,predict_median_ms\n",
                    0) == 0);
    CHECK(line_count(csv) == 1 + 2);
    CHECK(contains(csv, "swerling12"));
    CHECK(contains(csv, "tree"));
}

TEST_CASE("scalogram renders one image per signature") {
    const fs::path dir = scratch_dir("scalogram");
    const fs::path fleet = make_fleet(dir, "g", "--seed 9 --classes 2");
    const fs::path out = dir / "imgs";

    const RunResult r = run_cli("scalogram --data '" + fleet.string() +
                                    "' --size 227 --write-csv --out '" +
                                    out.string() + "'",
                                dir, "scal");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err.c_str());

    const fs::path png1 = out / "uav01_15_vv.png";
    const fs::path png2 = out / "uav02_15_vv.png";
    REQUIRE(fs::exists(png1));
    REQUIRE(fs::exists(png2));
    REQUIRE(fs::exists(out / "uav01_15_vv.csv"));

    const std::string png = slurp(png1);
    REQUIRE(png.size() > 8);
    // PNG magic bytes.
    CHECK(static_cast<unsigned char>(png[0]) == 0x89);
    CHECK(png.substr(1, 3) == "PNG");
}

TEST_CASE("hyperopt writes a trace and the best hyperparameters") {
    const fs::path dir = scratch_dir("hyperopt");
    const fs::path fleet = make_fleet(dir, "g", "--seed 2 --classes 3");
    const fs::path out = dir / "h";

    const RunResult r = run_cli(
        "hyperopt --data '" + fleet.string() +
            "' --family knn --budget 6 --train-copies 6 --seed 2 --out '" +
            out.string() + "'",
        dir, "hopt");
    REQUIRE_MESSAGE(r.exit_code == 0, r.err.c_str());
    CHECK(contains(r.out, "best holdout loss"));

    const std::string trace = slurp(out / "optimization_trace.csv");
    CHECK(trace.rfind("iteration,num_neighbors,metric,loss\n", 0) == 0);
    CHECK(line_count(trace) == 1 + 6);

    const std::string best = slurp(out / "best.json");
    CHECK(contains(best, "rcsclass-hyperopt"));
    CHECK(contains(best, "num_neighbors"));
    CHECK(contains(best, "metric"));
}

TEST_CASE("a config file supplies defaults and flags override it") {
    const fs::path dir = scratch_dir("config");

    const fs::path cfg = dir / "run.toml";
    {
        std::ofstream out(cfg);
        out << "[gen]\n"
            << "classes=4\n"
            << "separation-db=12\n"
            << "seed=5\n";
    }

    const fs::path from_cfg = dir / "from_cfg";
    const RunResult rc = run_cli("--config '" + cfg.string() + "' gen --out '" +
                                     from_cfg.string() + "'",
                                 dir, "cfg");
    REQUIRE_MESSAGE(rc.exit_code == 0, rc.err.c_str());
    CHECK(contains(rc.out, "(4 classes, 4 signatures)"));

    const fs::path from_flags = dir / "from_flags";
    const RunResult rf = run_cli(
        "gen --classes 4 --separation-db 12 --seed 5 --out '" +
            from_flags.string() + "'",
        dir, "flags");
    REQUIRE(rf.exit_code == 0);

    CHECK(slurp(from_cfg / "fleet.csv") == slurp(from_flags / "fleet.csv"));

    // An explicit flag wins over the config file value.
    const fs::path override_dir = dir / "override";
    const RunResult ro = run_cli("--config '" + cfg.string() +
                                     "' gen --classes 3 --out '" +
                                     override_dir.string() + "'",
                                 dir, "override");
    REQUIRE(ro.exit_code == 0);
    CHECK(contains(ro.out, "(3 classes, 3 signatures)"));
}
