#pragma once

/// @file series.hpp
/// @brief Checkpointed V_lambda(x) records and their line-delimited file format.
///
/// A series file is JSON lines. The first line is a header
///
///   {"format":"vlambda-series","version":1,"engine":"...","created":"..."}
///
/// and every following line is one checkpoint
///
///   {"version":1,"x":...,"v_lambda":...,"eta_hat":...,"wall_seconds":...,
///    "segment_size":...,"workers":...}
///
/// Integers are decimal; eta_hat is null where log log x <= 0. The file is
/// only ever appended to, each record flushed as it is written, so a run
/// interrupted at any point leaves a resumable prefix.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlambda/arith.hpp"

namespace vlambda {

inline constexpr int series_format_version = 1;
inline constexpr char const* series_format_name = "vlambda-series";

std::string engine_identifier();

/// log(x / v) / log log x; NaN when x < 3 or v == 0.
double eta_hat(u64 x, u64 v_lambda);

struct CountCheckpoint {
    u64 x = 0;
    u64 v_lambda = 0;
    double eta_hat = 0.0;
    double wall_seconds = 0.0;
    u64 segment_size = 0;
    unsigned workers = 0;
};

struct CountSeries {
    int version = series_format_version;
    std::string engine;
    std::string created;
    std::vector<CountCheckpoint> records;
};

/// Receives checkpoints in increasing x, one at a time.
class CheckpointSink {
public:
    virtual ~CheckpointSink() = default;
    virtual void emit(CountCheckpoint const& checkpoint) = 0;
};

std::string format_header_line(CountSeries const& series);
std::string format_record_line(CountCheckpoint const& checkpoint);

/// Throws corruption_error on a bad header, version mismatch, malformed or
/// truncated record, or non-increasing x. Empty input yields an empty series.
CountSeries read_series(std::istream& in);
CountSeries load_series(std::filesystem::path const& path);

/// Where counting picks up after a previous run.
struct ContinuationState {
    u64 next_n = 1;     ///< first integer not yet counted
    u64 base_count = 0; ///< V_lambda(next_n - 1)
    CountSeries series;
};

/// Empty or missing file restarts from 1.
ContinuationState resume(std::filesystem::path const& series_file);

/// Appends checkpoint lines to a file, writing the header first when the
/// file is new or empty. Throws sink_error when a write fails.
class SeriesFileSink : public CheckpointSink {
public:
    explicit SeriesFileSink(std::filesystem::path path, bool truncate = false);
    void emit(CountCheckpoint const& checkpoint) override;

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

} // namespace vlambda
