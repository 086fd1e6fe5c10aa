#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eidlab/config.hpp"
#include "eidlab/csv.hpp"
#include "eidlab/error.hpp"
#include "eidlab/experiments.hpp"

using namespace eidlab;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const char* name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p.string();
}

std::string write_temp(const char* name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config text parses sections, comments and preamble keys") {
    ExperimentConfig cfg = parse_config_text(
        "# battery setup\n"
        "experiment = axioms   # short name\n"
        "\n"
        "[axioms]\n"
        "trials = 50\n"
        "p = 2.5\n");
    CHECK(cfg.experiment() == "axioms");
    CHECK(cfg.get_long("axioms.trials", 0) == 50);
    CHECK(cfg.get_double("axioms.p", 0.0) == 2.5);
    CHECK(cfg.get_long("axioms.graphs", 12) == 12);  // fallback wins when absent
    CHECK(cfg.has("axioms.p"));
    CHECK(!cfg.has("axioms.graphs"));
}

TEST_CASE("config rejects out-of-range values with the full key path") {
    try {
        parse_config_text("[axioms]\np = 0.5\n");
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(contains(e.what(), "axioms.p"));
        CHECK(contains(e.what(), "exceed 1"));
    }
    try {
        parse_config_text("[gasket]\nlevel = 12\n");
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(contains(e.what(), "gasket.level"));
        CHECK(contains(e.what(), "cap"));
    }
    CHECK_THROWS_AS(parse_config_text("[gasket]\nalpha = 1.4\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[axioms]\ntrials = 2.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[axioms]\ntrials = many\n"), ValidationError);
}

TEST_CASE("config rejects unknown keys, duplicates and malformed lines") {
    try {
        parse_config_text("[axioms]\ntrails = 100\n");
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(contains(e.what(), "unknown key axioms.trails"));
    }
    try {
        parse_config_text("experiment = axioms\n[axioms]\ntrials = 1\ntrials = 2\n");
        FAIL("expected rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(contains(e.what(), "duplicate key axioms.trials"));
    }
    try {
        parse_config_text("experiment = axioms\n\nnot a key value\n");
        FAIL("expected rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config_text("[unfinished\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[axioms]\ntrials =\n"), ParseError);
}

TEST_CASE("missing config files surface as usage errors") {
    CHECK_THROWS_AS(parse_config("/nonexistent/eidlab.cfg"), ValidationError);
}

TEST_CASE("unknown experiment names and config mismatches are rejected") {
    RunOptions opt;
    opt.experiment = "spectral-gap";
    opt.out_dir = temp_dir("eidlab_cli_unknown");
    CHECK_THROWS_AS(run_experiment(opt), ValidationError);

    RunOptions mism;
    mism.experiment = "axioms-check";
    mism.config_path = write_temp("eidlab_mismatch.cfg", "experiment = gasket-mdim\n");
    mism.out_dir = temp_dir("eidlab_cli_mismatch");
    try {
        run_experiment(mism);
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(contains(e.what(), "gasket-mdim"));
        CHECK(contains(e.what(), "axioms-check"));
    }
}

TEST_CASE("experiment registry lists the full battery") {
    const auto& names = experiment_names();
    CHECK(names.size() == 8);
    for (const char* n : {"axioms-check", "eid-scalar", "eid-planar", "approx-demo",
                          "cones-demo", "currents-check", "preiss", "gasket-mdim"}) {
        CHECK(std::find(names.begin(), names.end(), std::string(n)) != names.end());
    }
}

TEST_CASE("same configuration and seed reproduce byte-identical tables") {
    std::string cfg = write_temp("eidlab_det.cfg",
                                 "experiment = axioms\n"
                                 "[axioms]\n"
                                 "trials = 40\n"
                                 "graphs = 3\n"
                                 "vertices = 12\n"
                                 "extra_edges = 6\n");
    RunOptions a;
    a.experiment = "axioms-check";  // short config name matches the leading token
    a.config_path = cfg;
    a.seed = 7;
    a.out_dir = temp_dir("eidlab_det_a");
    RunOptions b = a;
    b.out_dir = temp_dir("eidlab_det_b");

    CHECK(run_experiment(a) == 0);
    CHECK(run_experiment(b) == 0);
    std::string ta = read_text_file(a.out_dir + "/axioms.csv");
    std::string tb = read_text_file(b.out_dir + "/axioms.csv");
    CHECK(ta == tb);
    CHECK(ta.rfind("axiom,trials,worst_slack,pass", 0) == 0);

    fs::remove_all(a.out_dir);
    fs::remove_all(b.out_dir);
}

TEST_CASE("manifests record digests that match the files on disk") {
    std::string cfg = write_temp("eidlab_mani.cfg",
                                 "experiment = axioms\n"
                                 "[axioms]\n"
                                 "trials = 30\n"
                                 "graphs = 2\n"
                                 "vertices = 10\n"
                                 "extra_edges = 4\n");
    RunOptions opt;
    opt.experiment = "axioms-check";
    opt.config_path = cfg;
    opt.seed = 11;
    opt.out_dir = temp_dir("eidlab_mani_out");
    REQUIRE(run_experiment(opt) == 0);

    std::string manifest = read_text_file(opt.out_dir + "/manifest.txt");
    CHECK(contains(manifest, "experiment: axioms-check"));
    CHECK(contains(manifest, "seed: 11"));
    CHECK(contains(manifest, "status: pass"));
    CHECK(contains(manifest, "eidlab_version:"));
    CHECK(contains(manifest, "config: " + cfg + " fnv1a64:" + hex64(fnv1a64_file(cfg))));
    CHECK(contains(manifest, "output: axioms.csv fnv1a64:" +
                                 hex64(fnv1a64_file(opt.out_dir + "/axioms.csv"))));
    fs::remove_all(opt.out_dir);
}

TEST_CASE("a run that throws commits nothing to the output directory") {
    std::string cfg = write_temp("eidlab_bad_planar.cfg",
                                 "experiment = eid-planar\n"
                                 "[planar]\n"
                                 "base = 5\n"
                                 "levels = 2\n");
    RunOptions opt;
    opt.experiment = "eid-planar";
    opt.config_path = cfg;
    opt.out_dir = temp_dir("eidlab_bad_out");
    CHECK_THROWS_AS(run_experiment(opt), ValidationError);
    if (fs::exists(opt.out_dir)) {
        long committed = 0;
        for (const auto& entry : fs::directory_iterator(opt.out_dir)) {
            (void)entry;
            ++committed;
        }
        CHECK(committed == 0);
        fs::remove_all(opt.out_dir);
    }
}

TEST_CASE("plot data emission writes a bare header for empty row sets") {
    fs::path p = fs::temp_directory_path() / "eidlab_plot.csv";
    emit_plotdata(p.string(), "a,b", {});
    CHECK(read_text_file(p.string()) == "a,b\n");
    emit_plotdata(p.string(), "a,b", {{"1", "2"}, {"3", "4"}});
    CHECK(read_text_file(p.string()) == "a,b\n1,2\n3,4\n");
    fs::remove(p);
}

TEST_CASE("csv accumulator enforces the column count") {
    Csv csv("x,y");
    csv.add_row({"1", "2"});
    CHECK_THROWS_AS(csv.add_row({"1"}), ValidationError);
    CHECK_THROWS_AS(csv.add_row({"1", "2", "3"}), ValidationError);
    CHECK(csv.text() == "x,y\n1,2\n");
}

TEST_CASE("g17 formatting round-trips doubles through text exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 1e300, -2.5, 0.0, 6.02214076e23}) {
        std::string s = fmt_g17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("fnv1a64 matches the published reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
    CHECK(hex64(0x1ULL) == "0000000000000001");
}
