#include "vlambda/series.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "vlambda/errors.hpp"

namespace vlambda {

using nlohmann::json;

std::string engine_identifier() { return "vlambda-count/1.0 (segmented lcm sieve)"; }

double eta_hat(u64 x, u64 v_lambda) {
    if (x < 3 || v_lambda == 0)
        return std::numeric_limits<double>::quiet_NaN();
    double const lx = std::log(static_cast<double>(x));
    return std::log(static_cast<double>(x) / static_cast<double>(v_lambda)) / std::log(lx);
}

namespace {

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json record_json(CountCheckpoint const& c) {
    json j;
    j["version"] = series_format_version;
    j["x"] = c.x;
    j["v_lambda"] = c.v_lambda;
    if (std::isfinite(c.eta_hat))
        j["eta_hat"] = c.eta_hat;
    else
        j["eta_hat"] = nullptr;
    j["wall_seconds"] = c.wall_seconds;
    j["segment_size"] = c.segment_size;
    j["workers"] = c.workers;
    return j;
}

template <class T>
T require(json const& j, char const* key, std::size_t line_no) {
    auto it = j.find(key);
    if (it == j.end())
        throw corruption_error("series line " + std::to_string(line_no) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (json::exception const&) {
        throw corruption_error("series line " + std::to_string(line_no) + ": bad field '" + key + "'");
    }
}

} // namespace

std::string format_header_line(CountSeries const& series) {
    json j;
    j["format"] = series_format_name;
    j["version"] = series.version;
    j["engine"] = series.engine.empty() ? engine_identifier() : series.engine;
    j["created"] = series.created.empty() ? utc_now() : series.created;
    return j.dump();
}

std::string format_record_line(CountCheckpoint const& checkpoint) { return record_json(checkpoint).dump(); }

CountSeries read_series(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    CountSeries series;
    if (text.empty())
        return series;
    if (text.back() != '\n')
        throw corruption_error("series file ends with a truncated record");

    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        json j;
        try {
            j = json::parse(line);
        } catch (json::exception const&) {
            throw corruption_error("series line " + std::to_string(line_no) + " is not valid JSON");
        }
        if (!j.is_object())
            throw corruption_error("series line " + std::to_string(line_no) + " is not an object");
        int version = require<int>(j, "version", line_no);
        if (version != series_format_version)
            throw corruption_error("series version " + std::to_string(version) + " unsupported (expected " +
                                   std::to_string(series_format_version) + ")");
        if (line_no == 1) {
            if (require<std::string>(j, "format", line_no) != series_format_name)
                throw corruption_error("series header has wrong format tag");
            series.version = version;
            series.engine = require<std::string>(j, "engine", line_no);
            series.created = require<std::string>(j, "created", line_no);
            continue;
        }
        CountCheckpoint c;
        c.x = require<u64>(j, "x", line_no);
        c.v_lambda = require<u64>(j, "v_lambda", line_no);
        auto eh = j.find("eta_hat");
        if (eh == j.end())
            throw corruption_error("series line " + std::to_string(line_no) + ": missing field 'eta_hat'");
        c.eta_hat = eh->is_null() ? std::numeric_limits<double>::quiet_NaN() : require<double>(j, "eta_hat", line_no);
        c.wall_seconds = require<double>(j, "wall_seconds", line_no);
        c.segment_size = require<u64>(j, "segment_size", line_no);
        c.workers = require<unsigned>(j, "workers", line_no);
        if (!series.records.empty()) {
            auto const& prev = series.records.back();
            if (c.x <= prev.x || c.v_lambda < prev.v_lambda)
                throw corruption_error("series line " + std::to_string(line_no) + " breaks monotonicity");
        }
        if (c.v_lambda == 0 || c.v_lambda > c.x)
            throw corruption_error("series line " + std::to_string(line_no) + " has impossible count");
        series.records.push_back(c);
    }
    if (line_no == 0)
        throw corruption_error("series file has no header");
    return series;
}

CountSeries load_series(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw corruption_error("cannot open series file " + path.string());
    return read_series(in);
}

ContinuationState resume(std::filesystem::path const& series_file) {
    ContinuationState state;
    std::error_code ec;
    if (!std::filesystem::exists(series_file, ec))
        return state;
    state.series = load_series(series_file);
    if (!state.series.records.empty()) {
        auto const& last = state.series.records.back();
        state.next_n = last.x + 1;
        state.base_count = last.v_lambda;
    }
    return state;
}

SeriesFileSink::SeriesFileSink(std::filesystem::path path, bool truncate) : path_(std::move(path)) {
    std::error_code ec;
    bool const fresh = truncate || !std::filesystem::exists(path_, ec) || std::filesystem::file_size(path_, ec) == 0;
    out_.open(path_, truncate ? std::ios::trunc | std::ios::out : std::ios::app | std::ios::out);
    if (!out_)
        throw sink_error("cannot open series file " + path_.string() + " for writing");
    if (fresh) {
        out_ << format_header_line(CountSeries{}) << '\n';
        out_.flush();
        if (!out_)
            throw sink_error("failed writing series header to " + path_.string());
    }
}

void SeriesFileSink::emit(CountCheckpoint const& checkpoint) {
    out_ << format_record_line(checkpoint) << '\n';
    out_.flush();
    if (!out_)
        throw sink_error("failed writing checkpoint to " + path_.string());
}

} // namespace vlambda
