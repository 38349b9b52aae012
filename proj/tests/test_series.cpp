#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vlambda/errors.hpp"
#include "vlambda/series.hpp"

using namespace vlambda;

namespace {

CountSeries parse(std::string const& text) {
    std::istringstream in(text);
    return read_series(in);
}

std::string header() {
    CountSeries s;
    s.engine = engine_identifier();
    s.created = "2026-01-01T00:00:00Z";
    return format_header_line(s) + "\n";
}

} // namespace

TEST_CASE("eta hat") {
    CHECK(std::isnan(eta_hat(2, 1)));
    CHECK(std::isnan(eta_hat(100, 0)));
    double const x = 1e6, v = 256'158;
    CHECK(eta_hat(1'000'000, 256'158) == doctest::Approx(std::log(x / v) / std::log(std::log(x))));
}

TEST_CASE("round trip of random series") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::string text = header();
        std::vector<CountCheckpoint> want;
        u64 x = 0, v = 1;
        for (int i = 0; i < 20; ++i) {
            u64 step = 1 + rng() % 1'000'000;
            x += step;
            v += i ? rng() % (step + 1) : 0;
            CountCheckpoint c;
            c.x = x;
            c.v_lambda = v;
            c.eta_hat = eta_hat(c.x, c.v_lambda);
            c.wall_seconds = static_cast<double>(rng() % 100'000) / 1000.0;
            c.segment_size = u64{1} << (10 + rng() % 10);
            c.workers = 1 + static_cast<unsigned>(rng() % 8);
            want.push_back(c);
            text += format_record_line(c) + "\n";
        }
        auto got = parse(text);
        CHECK(got.version == series_format_version);
        CHECK(got.engine == engine_identifier());
        REQUIRE(got.records.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(got.records[i].x == want[i].x);
            CHECK(got.records[i].v_lambda == want[i].v_lambda);
            CHECK(got.records[i].segment_size == want[i].segment_size);
            CHECK(got.records[i].workers == want[i].workers);
            CHECK(got.records[i].wall_seconds == doctest::Approx(want[i].wall_seconds));
            if (std::isnan(want[i].eta_hat))
                CHECK(std::isnan(got.records[i].eta_hat));
            else
                CHECK(got.records[i].eta_hat == doctest::Approx(want[i].eta_hat).epsilon(1e-12));
        }
    }
}

TEST_CASE("empty input") {
    CHECK(parse("").records.empty());
    CHECK(parse(header()).records.empty());
}

TEST_CASE("malformed input") {
    CountCheckpoint c{.x = 100, .v_lambda = 40, .eta_hat = 0.1, .wall_seconds = 0, .segment_size = 1024, .workers = 1};
    std::string const rec = format_record_line(c) + "\n";
    CHECK_NOTHROW(parse(header() + rec));

    SUBCASE("bad header") { CHECK_THROWS_AS(parse("{\"format\":\"other\",\"version\":1}\n" + rec), corruption_error); }
    SUBCASE("not json") { CHECK_THROWS_AS(parse("hello\n"), corruption_error); }
    SUBCASE("version mismatch") {
        std::string h = header();
        h.replace(h.find("\"version\":1"), 11, "\"version\":2");
        CHECK_THROWS_AS(parse(h + rec), corruption_error);
    }
    SUBCASE("truncated record") {
        CHECK_THROWS_AS(parse(header() + rec.substr(0, rec.size() / 2)), corruption_error);
        CHECK_THROWS_AS(parse(header() + rec.substr(0, rec.size() - 1)), corruption_error);
    }
    SUBCASE("non increasing") {
        CHECK_THROWS_AS(parse(header() + rec + rec), corruption_error);
        CountCheckpoint later = c;
        later.x = 200;
        later.v_lambda = 39;
        CHECK_THROWS_AS(parse(header() + rec + format_record_line(later) + "\n"), corruption_error);
    }
    SUBCASE("count above x") {
        CountCheckpoint bad = c;
        bad.v_lambda = 101;
        CHECK_THROWS_AS(parse(header() + format_record_line(bad) + "\n"), corruption_error);
    }
    SUBCASE("missing field") {
        CHECK_THROWS_AS(parse(header() + "{\"version\":1,\"x\":100}\n"), corruption_error);
    }
}
