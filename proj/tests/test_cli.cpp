#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = vlambda::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json first_record(std::string const& out) {
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    return nlohmann::json::parse(line);
}

std::vector<nlohmann::json> records(std::string const& out) {
    std::vector<nlohmann::json> r;
    std::istringstream in(out);
    for (std::string line; std::getline(in, line);)
        r.push_back(nlohmann::json::parse(line));
    return r;
}

std::filesystem::path temp_file(char const* name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove(p);
    return p;
}

} // namespace

TEST_CASE("lambda, phi and member") {
    auto r = run({"lambda", "561"});
    CHECK(r.code == 0);
    CHECK(first_record(r.out)["lambda"] == 80);
    CHECK(first_record(run({"phi", "561"}).out)["phi"] == 320);

    r = run({"member", "14"});
    CHECK(r.code == 3);
    CHECK(first_record(r.out)["is_value"] == false);
    r = run({"member", "10", "--witness"});
    CHECK(r.code == 0);
    CHECK(first_record(r.out)["witness_factorization"] == "2^3*3*11");
    CHECK(run({"member", "0"}).code == 4);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"lambda"}).code == 2);
    CHECK(run({"lambda", "abc"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"count", "--limit", "100", "--segment-size", "10"}).code == 2);
    CHECK(run({"count", "--limit", "100", "--threads", "0"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("count output and csv") {
    auto r = run({"count", "--limit", "1000", "--checkpoints", "10,100", "--segment-size", "1024"});
    REQUIRE(r.code == 0);
    auto rec = records(r.out);
    REQUIRE(rec.size() == 3);
    CHECK(rec[0]["x"] == 10);
    CHECK(rec[0]["v_lambda"] == 6);
    CHECK(rec[2]["v_lambda"] == 328);

    r = run({"--format", "csv", "count", "--limit", "10", "--segment-size", "1024"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "x,v_lambda,eta_hat,wall_seconds");
    CHECK(row.rfind("10,6,", 0) == 0);
}

TEST_CASE("count writes, resumes and fits a series") {
    auto path = temp_file("vlambda_cli_series.jsonl");
    auto r = run({"count", "--limit", "100000", "--checkpoints", "1000", "--out", path.string()});
    REQUIRE(r.code == 0);
    r = run({"count", "--limit", "200000", "--checkpoints", "150000", "--resume", path.string()});
    REQUIRE(r.code == 0);
    CHECK(records(r.out).size() == 2);

    auto fresh = run({"count", "--limit", "200000", "--checkpoints", "1000,100000,150000"});
    auto fit = run({"fit", "--in", path.string()});
    REQUIRE(fit.code == 0);
    auto a = records(fresh.out), b = records(fit.out);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i]["x"] == b[i]["x"]);
        CHECK(a[i]["v_lambda"] == b[i]["v_lambda"]);
        CHECK(a[i]["eta_hat"].get<double>() == doctest::Approx(b[i]["eta_hat"].get<double>()));
    }

    { std::ofstream(path, std::ios::app) << "{\"version\":1,\"x\":"; }
    CHECK(run({"fit", "--in", path.string()}).code == 5);
    CHECK(run({"count", "--limit", "300000", "--resume", path.string()}).code == 5);
    std::filesystem::remove(path);
}

TEST_CASE("range errors map to exit 4") {
    CHECK(run({"count", "--limit", "20000000000"}).code == 2);
    CHECK(run({"reps", "12", "--k", "2", "--relax"}).code == 4);
    CHECK(run({"lemma1", "--x", "1000000", "--h", "9"}).code == 4);
    CHECK(run({"phicount", "--limit", "100000000"}).code == 4);
    CHECK(run({"multtable", "--n", "100000"}).code == 4);
}

TEST_CASE("analytics commands") {
    auto c = records(run({"constants", "--k-max", "3"}).out);
    REQUIRE(c.size() == 5);
    CHECK(c[0]["name"] == "eta");
    CHECK(c[1]["name"] == "alpha");
    CHECK(c[2]["value"] == 0.359052);
    CHECK(c[3]["name"] == "beta_2");

    CHECK(first_record(run({"phicount", "--limit", "10"}).out)["v_phi"] == 6);
    CHECK(first_record(run({"multtable", "--n", "4"}).out)["distinct"] == 9);
    auto d = first_record(run({"dual", "--k", "3", "--m", "1", "--omega", "2"}).out);
    CHECK(d["formula"] == 625);
    CHECK(d["bruteforce"] == 625);
    auto bv = run({"bvcheck", "--k", "3", "--m", "2", "--trials", "3"});
    CHECK(bv.code == 0);
    CHECK(first_record(bv.out)["holds"] == true);
    auto om = first_record(run({"omegadist", "--limit", "10"}).out);
    CHECK(om["image_size"] == 6);
    auto lm = first_record(run({"lemma1", "--x", "1000000", "--h", "2"}).out);
    CHECK(lm["ratio"].get<double>() > 0.05);
}

TEST_CASE("representation commands") {
    auto r = run({"reps", "174", "--k", "2", "--relax"});
    REQUIRE(r.code == 0);
    auto rec = first_record(r.out);
    CHECK(rec["r"] == rec["representations"].size());
    for (auto const& rep : rec["representations"])
        for (auto const& q : rep["q"])
            CHECK(q != 175);
    auto s = first_record(run({"s1s2", "--x", "2000", "--k", "2", "--relax"}).out);
    CHECK(s["cauchy_holds"] == true);
}

TEST_CASE("global options after the subcommand") {
    auto r = run({"bvcheck", "--k", "3", "--m", "1", "--trials", "2", "--seed", "5"});
    CHECK(r.code == 0);
    CHECK(first_record(r.out)["seed"] == 5);
    r = run({"lambda", "561", "--format", "csv"});
    CHECK(r.out == "n,lambda\n561,80\n");
}
