#pragma once

/// @file count_engine.hpp
/// @brief Exact V_lambda(x) by a segmented lcm-accumulation sieve.
///
/// For each n in a segment the sieve builds L(n) (see image_oracle.hpp):
/// acc[n] starts at 2^(v_2(n)) and is lcm-ed with (p-1) p^(v_p(n)) for
/// every odd prime p with (p-1) | n. n is a lambda value iff acc[n] == n.
///
/// Primes with p - 1 <= segment size are walked by stride. Larger primes
/// hit each segment at most a few times; they are reached by iterating the
/// cofactor q = n / (p-1) and scanning the primality bitmap over
/// [lo/q, hi/q), so no per-prime state is carried between segments and
/// segments are fully independent work units.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vlambda/arith.hpp"
#include "vlambda/prime_source.hpp"
#include "vlambda/series.hpp"

namespace vlambda {

struct EngineConfig {
    static constexpr u64 min_segment_size = u64{1} << 10;
    static constexpr u64 default_max_x = 10'000'000'000ULL;

    u64 segment_size = u64{1} << 20;
    unsigned workers = 1;
    u64 max_x = default_max_x;
};

unsigned default_workers() noexcept;

/// Half-open segment [lo, hi) with its accumulator. Segments of a plan
/// partition the counted range.
struct SegmentPlan {
    u64 lo = 1;
    u64 hi = 1;
    u64 segment_size = 0;
    std::vector<u64> accumulator;
};

/// Per-n verdict for [lo, hi): out[i] = 1 iff lo + i is a lambda value.
/// Requires 1 <= lo <= hi <= primes.bound() + 1. `stride_bound` separates
/// stride-walked primes (p - 1 <= stride_bound) from cofactor-scanned ones.
void segment_membership(u64 lo, u64 hi, PrimeSource const& primes, std::span<std::uint8_t> out,
                        u64 stride_bound = 0);

/// #{n in [lo, hi) : n is a lambda value}.
u64 count_segment(u64 lo, u64 hi, PrimeSource const& primes);

class CountEngine {
public:
    /// Sieves primes up to x_limit + 1. Throws config_error for
    /// x_limit > config.max_x or segment_size below the minimum.
    CountEngine(u64 x_limit, EngineConfig config = {});

    u64 x_limit() const noexcept { return x_limit_; }
    EngineConfig const& config() const noexcept { return config_; }
    PrimeSource const& primes() const noexcept { return *primes_; }

    /// Fills plan.accumulator with L(n) for n in [plan.lo, plan.hi).
    void accumulate(SegmentPlan& plan) const;
    u64 count_segment(u64 lo, u64 hi) const;
    void segment_membership(u64 lo, u64 hi, std::span<std::uint8_t> out) const;

    /// Counts through x, emitting one checkpoint for each requested value
    /// (plus x itself) in increasing order through `sink` (may be null).
    /// With `from`, counting continues after its last recorded checkpoint;
    /// checkpoints at or below that point are dropped. The returned series
    /// holds the prior records followed by the new ones.
    CountSeries count_up_to(u64 x, std::span<const u64> checkpoints, CheckpointSink* sink = nullptr,
                            ContinuationState const* from = nullptr) const;

private:
    u64 x_limit_;
    EngineConfig config_;
    std::shared_ptr<const PrimeSource> primes_;
    std::vector<std::uint32_t> stride_primes_; // odd primes with p - 1 <= segment_size
};

} // namespace vlambda
