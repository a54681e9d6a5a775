#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subrate/config.hpp"
#include "subrate/experiments.hpp"

using namespace subrate;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "subrate_test" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parsing: sections, comments, typed getters") {
    const Config cfg = Config::parse_string(
        "# a comment\n"
        "[experiment]\n"
        "kind = moment-sweep   # trailing comment\n"
        "seed = 7\n"
        "[phi]\n"
        "family = stable\n"
        "alpha = 0.5\n"
        "[grid]\n"
        "values = 1, 2.5, 10\n");
    CHECK(cfg.get_string("experiment", "kind") == "moment-sweep");
    CHECK(cfg.get_u64("experiment", "seed", 0) == 7);
    CHECK(cfg.get_double("phi", "alpha") == 0.5);
    CHECK(cfg.get_double("phi", "missing", 3.0) == 3.0);
    CHECK(cfg.get_list("grid", "values") == std::vector<double>{1.0, 2.5, 10.0});
    CHECK(cfg.has_section("phi"));
    CHECK_FALSE(cfg.has("phi", "beta"));
    const auto params = cfg.numeric_params("phi", {"family"});
    CHECK(params.size() == 1);
    CHECK(params.at("alpha") == 0.5);
    CHECK(cfg.hash().size() == 16);

    CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);          // outside a section
    CHECK_THROWS_AS(Config::parse_string("[s]\nnot a pair\n"), ConfigError);  // missing '='
    CHECK_THROWS_AS(cfg.get_double("experiment", "kind"), ConfigError);       // not a number
}

TEST_CASE("builders reject broken specs") {
    const Config bad_kind = Config::parse_string("[experiment]\nkind = nonsense\n");
    CHECK_THROWS_AS(run_experiment(bad_kind), ConfigError);

    const Config decreasing = Config::parse_string(
        "[experiment]\nkind = moment-sweep\n[moment]\ntype = neg\nbeta = 0.5\n"
        "[phi]\nfamily = stable\nalpha = 0.5\n[grid]\nvalues = 2, 1\n");
    CHECK_THROWS_AS(run_experiment(decreasing), ConfigError);

    const Config no_grid = Config::parse_string(
        "[experiment]\nkind = moment-sweep\n[moment]\ntype = neg\nbeta = 0.5\n"
        "[phi]\nfamily = stable\nalpha = 0.5\n[grid]\nvalues =\n");
    CHECK_THROWS_AS(run_experiment(no_grid), ConfigError);

    const Config tiny_n = Config::parse_string(
        "[experiment]\nkind = subordinate-rate\n[model]\nN = 10\n"
        "[control]\ncase = b\ntheta = 2\nbeta = 1\n"
        "[subordinator]\nfamily = stable\nalpha = 0.5\n[grid]\nlo = 1\nhi = 4\npoints = 3\n"
        "[mc]\nn = 10\n");
    CHECK_THROWS_AS(run_experiment(tiny_n), ConfigError);

    const Config bad_family = Config::parse_string(
        "[experiment]\nkind = moment-sweep\n[moment]\ntype = neg\nbeta = 0.5\n"
        "[phi]\nfamily = zeta\n[grid]\nvalues = 1\n");
    CHECK_THROWS_AS(run_experiment(bad_family), ConfigError);
}

TEST_CASE("moment sweep experiment writes csv and summary") {
    const auto dir = fresh_dir("moment");
    const Config cfg = Config::parse_string(
        "[experiment]\nkind = moment-sweep\nname = neg_stable\nseed = 5\n"
        "[moment]\ntype = neg\nbeta = 0.5\n"
        "[phi]\nfamily = stable\nalpha = 0.5\n"
        "[grid]\nlo = 0.1\nhi = 100\npoints = 8\n");
    RunOverrides ov;
    ov.out_dir = dir.string();
    CHECK(run_experiment(cfg, ov) == 0);

    const std::string csv = slurp(dir / "neg_stable.csv");
    CHECK(csv.rfind("t,value,error,bound_low,bound_high,log_value,log_error\n", 0) == 0);
    // header + 8 grid rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

    const std::string summary = slurp(dir / "neg_stable_summary.json");
    CHECK(summary.find("\"config_hash\"") != std::string::npos);
    CHECK(summary.find(cfg.hash()) != std::string::npos);
    CHECK(summary.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("identical config and seed reproduce byte-identical artifacts") {
    const Config cfg = Config::parse_string(
        "[experiment]\nkind = moment-sweep\nname = transfer\nseed = 11\n"
        "[moment]\ntype = rate-transfer\nn = 5000\n"
        "[rate]\nfamily = algebraic\nbeta = 0.5\n"
        "[subordinator]\nfamily = stable\nalpha = 0.5\n"
        "[grid]\nlo = 1\nhi = 100\npoints = 6\n");
    const auto d1 = fresh_dir("rep1");
    const auto d2 = fresh_dir("rep2");
    RunOverrides o1, o2;
    o1.out_dir = d1.string();
    o2.out_dir = d2.string();
    CHECK(run_experiment(cfg, o1) == 0);
    CHECK(run_experiment(cfg, o2) == 0);
    CHECK(slurp(d1 / "transfer.csv") == slurp(d2 / "transfer.csv"));
    // a different seed must change the Monte Carlo artifact
    o2.seed = 12;
    CHECK(run_experiment(cfg, o2) == 0);
    CHECK(slurp(d1 / "transfer.csv") != slurp(d2 / "transfer.csv"));
}

TEST_CASE("drift check experiment verdicts") {
    const auto dir = fresh_dir("drift");
    const Config ok = Config::parse_string(
        "[experiment]\nkind = drift-check\nname = ou_ok\n"
        "[drift]\npreset = ou\nM = 2\nb_const = 4\n"
        "[driver]\nfamily = power\nc1 = 1\nkappa = 0.5\n");
    RunOverrides ov;
    ov.out_dir = dir.string();
    // V = 1 + x^2 against phi(v) = sqrt(v): A V = -2x^2 + 2 <= -sqrt(1+x^2) + 4*1
    CHECK(run_experiment(ok, ov) == 0);

    const Config broken = Config::parse_string(
        "[experiment]\nkind = drift-check\nname = ou_broken\n"
        "[drift]\npreset = ou\nM = 2\nb_const = 0.25\n"
        "[driver]\nfamily = power\nc1 = 1\nkappa = 0.5\n");
    CHECK(run_experiment(broken, ov) == 1);
    const std::string summary = slurp(dir / "ou_broken_summary.json");
    CHECK(summary.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("qprocess experiment end to end (small)") {
    const auto dir = fresh_dir("qp");
    const Config cfg = Config::parse_string(
        "[experiment]\nkind = qprocess-rate\nname = plain\n"
        "[model]\nN = 40\nlambda_rule = inverse-index\np_rule = power\np_param = 4\n"
        "[control]\ncase = b\ntheta = 2\nbeta = 1\n"
        "[grid]\nlo = 1\nhi = 16\npoints = 8\n");
    RunOverrides ov;
    ov.out_dir = dir.string();
    CHECK(run_experiment(cfg, ov) == 0);
    const std::string csv = slurp(dir / "plain.csv");
    CHECK(csv.rfind("t,distance,se,rate_prediction,fitted_C\n", 0) == 0);
}

}  // TEST_SUITE
