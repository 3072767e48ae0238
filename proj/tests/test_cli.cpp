#include <doctest.h>

#include <bvqlab/config.hpp>
#include <bvqlab/runner.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using bvqlab::Config;
using bvqlab::ConfigError;

namespace {

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("BVQ_TEST_SCRATCH");
    const fs::path root = env ? fs::path(env) : fs::temp_directory_path() / "bvqlab_cli_test";
    const auto dir = root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text, const std::string& file = "run.cfg") {
    const auto p = dir / file;
    std::ofstream(p) << text;
    return p;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::string& cmd, const fs::path& config, const fs::path& out, std::optional<std::uint64_t> seed = {}) {
    bvqlab::RunOptions o;
    o.config = config;
    o.out = out;
    o.seed = seed;
    std::ostringstream so, se;
    const int code = bvqlab::run(cmd, o, so, se);
    return {code, so.str(), se.str()};
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kStep = R"(# 1D step, q = 1
schema = 1
field.gallery = step1d
field.cells = 2048
q = 1
schedule.eps_max = 0.2
schedule.ratio = 0.7
schedule.count = 9
)";

}  // namespace

TEST_CASE("dotted config parsing") {
    const auto c = Config::parse_text("a.b = 1\n# comment\n\nname = step1d  \nlist = 1, 2,3\npts = 0,0; 1,2\nflag = true\n");
    CHECK(c.get_double("a.b") == 1.0);
    CHECK(c.get_string("name") == "step1d");
    CHECK(c.get_list("list") == std::vector<double>{1, 2, 3});
    CHECK(c.get_points("pts").size() == 2);
    CHECK(c.get_bool("flag"));
    CHECK(c.get_int("missing", 4) == 4);
    CHECK_THROWS_WITH_AS(Config::parse_text("a = 1\na = 2\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse_text("a = 1\njunk line\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(c.get_double("name"), doctest::Contains("name"), ConfigError);
    CHECK_THROWS_WITH_AS(c.get_double("absent"), doctest::Contains("absent"), ConfigError);
    CHECK_THROWS_WITH_AS(c.require_known({"a.b", "name", "list", "pts"}, {}), doctest::Contains("flag"), ConfigError);
}

TEST_CASE("JSON configs flatten to the same keys") {
    const auto c = Config::parse_json(R"({"field": {"gallery": "disk", "cells": [64, 64]}, "q": 2,
                                          "oscillation": {"points": [[0.25, 0], [0, 0]]}})");
    CHECK(c.get_string("field.gallery") == "disk");
    CHECK(c.get_list("field.cells") == std::vector<double>{64, 64});
    CHECK(c.get_double("q") == 2.0);
    CHECK(c.get_points("oscillation.points")[0] == std::vector<double>{0.25, 0});
    CHECK_THROWS_AS(Config::parse_json("{not json"), ConfigError);
}

TEST_CASE("verify on a 1D step passes with ratio near 1") {
    const auto dir = scratch("verify");
    const auto r = run("verify", write_config(dir, kStep), dir / "out");
    REQUIRE(r.code == bvqlab::ok);
    const auto rep = read_json(dir / "out" / "report.json");
    const auto& v = rep["results"]["inequality"];
    CHECK(v["pass"].get<bool>());
    CHECK(v["ratio"].get<double>() >= 0.95);
    CHECK(v["ratio"].get<double>() <= 1.05);
    CHECK(rep["config"]["field.gallery"] == "step1d");
    CHECK(rep.contains("version"));
    CHECK(fs::exists(dir / "out" / "besov_eps.dat"));
}

TEST_CASE("malformed configs exit 2 and name the key") {
    const auto dir = scratch("malformed");
    auto r = run("verify", write_config(dir, std::string(kStep) + "schedule.cuont = 3\n"), dir / "out");
    CHECK(r.code == bvqlab::config_error);
    CHECK(r.err.find("schedule.cuont") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));

    r = run("verify", write_config(dir, std::string(kStep) + "q = two\n", "dup.cfg"), dir / "out");
    CHECK(r.code == bvqlab::config_error);
    CHECK(r.err.find("line 9") != std::string::npos);

    r = run("besov", write_config(dir, "field.gallery = step1d\nq = abc\n", "nan.cfg"), dir / "out");
    CHECK(r.code == bvqlab::config_error);
    CHECK(r.err.find("'q'") != std::string::npos);

    r = run("besov", write_config(dir, "field.gallery = nowhere\n", "name.cfg"), dir / "out");
    CHECK(r.code == bvqlab::config_error);
    CHECK(r.err.find("nowhere") != std::string::npos);
}

TEST_CASE("guard violations are pre-flight") {
    const auto dir = scratch("guard");
    const auto cfg = write_config(dir, "field.gallery = step1d\nfield.cells = 64\nschedule.eps_max = 0.05\nschedule.count = 5\n");
    const auto r = run("besov", cfg, dir / "out");
    CHECK(r.code == bvqlab::guard_violation);
    CHECK(r.err.find("remediation") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("identical configs give identical reports apart from the run block") {
    const auto dir = scratch("determinism");
    const auto cfg = write_config(dir, "field.gallery = disk\nfield.dim = 2\nfield.cells = 64\nq = 1\n");
    REQUIRE(run("jumps", cfg, dir / "a", 5).code == 0);
    REQUIRE(run("jumps", cfg, dir / "b", 5).code == 0);
    auto a = read_json(dir / "a" / "report.json"), b = read_json(dir / "b" / "report.json");
    CHECK(a.contains("run"));
    a.erase("run");
    b.erase("run");
    CHECK(a.dump() == b.dump());
    CHECK(slurp(dir / "a" / "jumps.csv") == slurp(dir / "b" / "jumps.csv"));
    CHECK(slurp(dir / "a" / "interface.txt") == slurp(dir / "b" / "interface.txt"));
}

TEST_CASE("constants table") {
    const auto dir = scratch("constants");
    const auto r = run("constants", write_config(dir, "constants.max_dim = 5\n"), dir / "out");
    REQUIRE(r.code == 0);
    const auto rep = read_json(dir / "out" / "report.json");
    const auto& rows = rep["results"]["constants"];
    CHECK(rows[0]["C_N"].get<double>() == doctest::Approx(2.0));
    CHECK(rows[2]["C_N_sphere"].get<double>() == doctest::Approx(2.0 * 3.14159265358979 / 3).epsilon(1e-3));
    CHECK(rep["verdicts"]["gamma_below_C_N"].get<bool>());
}

TEST_CASE("oscillation, lusin and export/import round trip") {
    const auto dir = scratch("pipeline");
    const auto osc = write_config(dir, "field.gallery = step1d\nfield.cells = 2048\noscillation.points = 0; 0.25\n", "osc.cfg");
    REQUIRE(run("oscillation", osc, dir / "osc").code == 0);
    const auto pts = read_json(dir / "osc" / "report.json")["results"]["points"];
    CHECK(pts[0]["in_Sdoubleprime"]["value"].get<bool>());
    CHECK_FALSE(pts[1]["in_S"]["value"].get<bool>());

    const auto lus = write_config(dir,
                                  "field.gallery = step1d\nfield.cells = 1024\nlusin.K.lower = -0.4\nlusin.K.upper = 0.4\n"
                                  "schedule.eps_max = 0.1\nschedule.ratio = 0.8\nschedule.count = 14\n",
                                  "lusin.cfg");
    REQUIRE(run("lusin", lus, dir / "lusin").code == 0);
    const auto cert = read_json(dir / "lusin" / "certificate.json");
    CHECK(cert["audit"]["pass"].get<bool>());
    CHECK(cert["max_deviation_on_B"].get<double>() == 0.0);
    CHECK(fs::exists(dir / "lusin" / "extension.bvqf"));

    REQUIRE(run("export", write_config(dir, kStep, "exp.cfg"), dir / "exp").code == 0);
    const auto imp = write_config(dir, "field.import = " + (dir / "exp" / "field.bvqf").string() + "\n", "imp.cfg");
    REQUIRE(run("import", imp, dir / "imp").code == 0);
    CHECK(read_json(dir / "imp" / "report.json")["results"]["import"]["cells"] == 2048);
}

TEST_CASE("gallery listing") {
    bvqlab::RunOptions o;
    std::ostringstream so, se;
    REQUIRE(bvqlab::run("gallery-list", o, so, se) == 0);
    const auto text = so.str();
    CHECK(text.find("h_combo") != std::string::npos);
    CHECK(text.find("J' contains 0") != std::string::npos);
    CHECK(text.find("box inside B_{1/2}(0)") != std::string::npos);
    std::ostringstream again;
    bvqlab::run("gallery-list", o, again, se);
    CHECK(again.str() == text);
    CHECK(bvqlab::run("bogus", o, so, se) == bvqlab::config_error);
}
