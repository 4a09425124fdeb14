#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "desitter/cli.hpp"
#include "desitter/errors.hpp"
#include "desitter/io.hpp"

using namespace desitter;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("desitter_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::fmt(v)) == v);
    CHECK(io::fmt(1.0) == "1");
    CHECK(io::fmt(NAN) == "nan");
    CHECK(io::fmt(-INFINITY) == "-inf");
}

TEST_CASE("tables") {
    io::Table t{{"x", "u"}, {}};
    t.add({"1", "2"});
    t.add({"3", "4"});
    CHECK(io::to_csv(t) == "x,u\n1,2\n3,4\n");
    CHECK(io::to_dat(t) == "# x u\n1 2\n3 4\n");
    CHECK_THROWS(t.add({"1"}));
}

TEST_CASE("sha256") {
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("atomic writes leave no temporaries") {
    const fs::path d = scratch("io");
    io::OutputDir out(d);
    out.write("a.txt", "hello\n");
    out.write("a.txt", "again\n");
    CHECK(slurp(d / "a.txt") == "again\n");
    CHECK(std::distance(fs::directory_iterator(d), fs::directory_iterator()) == 1);
    CHECK(out.files().back().sha256 == io::sha256_hex("again\n"));
    fs::remove_all(d);
}

TEST_CASE("solve-1d writes the requested grid") {
    const fs::path d = scratch("solve1d");
    cli::ExperimentSpec spec;
    spec.subcommand = "solve-1d";
    spec.params = {{"phi0", "gaussian:4"}, {"t", "1"}, {"x-grid", "-3:3:601"}};
    spec.out_dir = d;
    const cli::RunResult r = cli::run(spec);
    REQUIRE(r.status == cli::kOk);
    const std::string csv = slurp(d / "solution.csv");
    CHECK(count_lines(csv) == 602);
    CHECK(csv.rfind("x,u,est_err\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);

    // every file is in the manifest with its hash
    const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
    CHECK(m["spec"]["subcommand"] == "solve-1d");
    CHECK(m["spec"]["params"]["route"] == "cauchy");
    CHECK(m["files"].size() == 2);
    for (const auto& f : m["files"]) {
        CHECK(io::sha256_hex(slurp(d / f["name"].get<std::string>())) == f["sha256"].get<std::string>());
    }

    // identical spec, identical bytes
    const fs::path d2 = scratch("solve1d_again");
    spec.out_dir = d2;
    REQUIRE(cli::run(spec).status == cli::kOk);
    CHECK(slurp(d2 / "solution.csv") == csv);
    fs::remove_all(d);
    fs::remove_all(d2);
}

TEST_CASE("identities ledger shape") {
    const fs::path d = scratch("identities");
    cli::ExperimentSpec spec;
    spec.subcommand = "identities";
    spec.params = {{"t", "0.5,1,2"}, {"samples", "50"}};
    spec.out_dir = d;
    REQUIRE(cli::run(spec).status == cli::kOk);
    CHECK(count_lines(slurp(d / "identities.csv")) == 1 + 9 * 150);
    fs::remove_all(d);
}

TEST_CASE("compare-fd reports a small discrepancy") {
    const fs::path d = scratch("comparefd");
    cli::ExperimentSpec spec;
    spec.subcommand = "compare-fd";
    spec.params = {{"case", "gaussian"}, {"t", "1"}};
    spec.out_dir = d;
    REQUIRE(cli::run(spec).status == cli::kOk);
    const auto j = nlohmann::json::parse(slurp(d / "compare.json"));
    CHECK(j["case"] == "gaussian:4");
    CHECK(j["rel_l2_error"].get<double>() < 1e-3);
    fs::remove_all(d);
}

TEST_CASE("exit statuses") {
    cli::ExperimentSpec spec;
    spec.subcommand = "solve-1d";
    spec.out_dir = scratch("status");
    spec.params = {{"bogus", "1"}};
    CHECK(cli::run(spec).status == cli::kValidation);
    CHECK_FALSE(fs::exists(spec.out_dir));  // rejected before anything is written

    spec.params = {{"phi0", "gaussian:-1"}};
    CHECK(cli::run(spec).status == cli::kValidation);
    spec.params = {{"t", "abc"}};
    CHECK(cli::run(spec).status == cli::kValidation);

    spec.subcommand = "solve-nd";
    spec.params = {{"n", "4"}};
    CHECK(cli::run(spec).status == cli::kValidation);

    spec.subcommand = "eval-kernel";
    spec.params = {{"kernel", "K1"}, {"t0", "0.5"}};
    CHECK(cli::run(spec).status == cli::kValidation);

    // a quadrature tolerance below what doubles can deliver
    spec.subcommand = "solve-1d";
    spec.params = {{"phi0", "bump:0.3"}, {"x-grid", "0.1:1:10"}, {"abs-tol", "1e-300"}, {"rel-tol", "1e-300"}};
    const cli::RunResult r = cli::run(spec);
    CHECK(r.status == cli::kAccuracy);
    const auto m = nlohmann::json::parse(slurp(spec.out_dir / "manifest.json"));
    CHECK(m["status"] == cli::kAccuracy);

    spec.subcommand = "nope";
    spec.params.clear();
    CHECK(cli::run(spec).status == cli::kValidation);
    fs::remove_all(spec.out_dir);
}

TEST_CASE("JSON experiment specs") {
    const auto spec = cli::ExperimentSpec::from_json(
        R"({"subcommand": "audit-decay", "params": {"t-grid": [0.5, 1, 2], "p": 1.5, "enumerate": true}, "out_dir": "x"})");
    CHECK(spec.subcommand == "audit-decay");
    CHECK(spec.params.at("t-grid") == "0.5,1,2");
    CHECK(spec.params.at("p") == "1.5");
    CHECK(spec.params.at("enumerate") == "true");
    CHECK(spec.out_dir == "x");
    CHECK(spec.resolved().at("q") == "2");
    CHECK_THROWS_AS(cli::ExperimentSpec::from_json(R"({"subcommand": "solve-1d", "extra": 1})"), ValidationError);
    CHECK_THROWS_AS(cli::ExperimentSpec::from_json(R"({"params": {}})"), ValidationError);
    CHECK_THROWS_AS(cli::ExperimentSpec::from_json("not json"), ValidationError);
    const auto bad = cli::ExperimentSpec::from_json(R"({"subcommand": "solve-1d", "params": {"nope": 1}})");
    CHECK_THROWS_AS((void)bad.resolved(), ValidationError);
}

TEST_CASE("every subcommand has documented defaults") {
    for (const auto& s : cli::subcommands()) {
        CHECK_FALSE(cli::subcommand_params(s).empty());
        cli::ExperimentSpec spec;
        spec.subcommand = s;
        CHECK_NOTHROW((void)spec.resolved());
    }
}
