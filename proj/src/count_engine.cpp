#include "vlambda/count_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "vlambda/errors.hpp"

namespace vlambda {

unsigned default_workers() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

namespace {

inline void lcm_into(u64& acc, u64 c) noexcept { acc = acc / std::gcd(acc, c) * c; }

inline u64 ceil_div(u64 a, u64 b) noexcept { return a / b + (a % b != 0); }

// Writes L(n) for n in [lo, hi) into acc[0 .. hi-lo).
void accumulate_range(u64 lo, u64 hi, PrimeSource const& primes, std::span<const std::uint32_t> stride_primes,
                      u64 stride_bound, u64* acc) {
    for (u64 n = lo; n < hi; ++n)
        acc[n - lo] = n & (~n + 1); // 2^(v_2(n)); 1 for odd n

    for (std::uint32_t p32 : stride_primes) {
        u64 const p = p32;
        u64 const d = p - 1;
        if (d >= hi)
            break;
        for (u64 n = ceil_div(lo, d) * d; n < hi; n += d)
            lcm_into(acc[n - lo], d);
        // Multiples of p (p - 1) need the p-power part of the contribution.
        if (u128{p} * d < hi) {
            u64 const pd = p * d;
            for (u64 n = ceil_div(lo, pd) * pd; n < hi; n += pd) {
                u64 c = pd;
                for (u64 m = n / pd; m % p == 0; m /= p)
                    c *= p;
                lcm_into(acc[n - lo], c);
            }
        }
    }

    // p - 1 > stride_bound: n = q (p - 1) with small cofactor q.
    for (u64 q = 1; u128{q} * (stride_bound + 1) < hi; ++q) {
        u64 const d_lo = std::max(stride_bound + 1, ceil_div(lo, q));
        u64 const d_hi = (hi - 1) / q + 1; // q d < hi
        if (d_lo >= d_hi)
            continue;
        primes.for_each_prime(d_lo + 1, d_hi + 1, [&](u64 p) {
            u64 const d = p - 1;
            u64 c = d;
            if (p <= q)
                for (u64 t = q; t % p == 0; t /= p)
                    c *= p;
            lcm_into(acc[q * d - lo], c);
        });
    }
}

void check_bounds(u64 lo, u64 hi, PrimeSource const& primes) {
    if (lo == 0 || lo > hi)
        throw range_error("segment needs 1 <= lo <= hi");
    if (hi > primes.bound() + 1)
        throw range_error("segment end " + std::to_string(hi) + " exceeds prime source bound " +
                          std::to_string(primes.bound()));
}

u64 flag_members(u64 lo, std::span<const u64> acc, std::span<std::uint8_t> out) {
    u64 count = 0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        u64 const n = lo + i;
        if (acc[i] > n) [[unlikely]]
            std::terminate(); // L(n) | n is an invariant of the sieve
        std::uint8_t const member = acc[i] == n;
        if (!out.empty())
            out[i] = member;
        count += member;
    }
    return count;
}

} // namespace

void segment_membership(u64 lo, u64 hi, PrimeSource const& primes, std::span<std::uint8_t> out, u64 stride_bound) {
    check_bounds(lo, hi, primes);
    if (out.size() < hi - lo)
        throw range_error("membership buffer too small");
    if (stride_bound == 0)
        stride_bound = std::max<u64>(hi - lo, EngineConfig::min_segment_size);
    auto stride = primes.primes_up_to(std::min(stride_bound + 1, primes.bound()));
    std::vector<u64> acc(hi - lo);
    accumulate_range(lo, hi, primes, stride, stride_bound, acc.data());
    flag_members(lo, acc, out);
}

u64 count_segment(u64 lo, u64 hi, PrimeSource const& primes) {
    check_bounds(lo, hi, primes);
    u64 const stride_bound = std::max<u64>(hi - lo, EngineConfig::min_segment_size);
    auto stride = primes.primes_up_to(std::min(stride_bound + 1, primes.bound()));
    std::vector<u64> acc(hi - lo);
    accumulate_range(lo, hi, primes, stride, stride_bound, acc.data());
    return flag_members(lo, acc, {});
}

CountEngine::CountEngine(u64 x_limit, EngineConfig config) : x_limit_(x_limit), config_(config) {
    if (x_limit < 1)
        throw config_error("count limit must be at least 1");
    if (x_limit > config_.max_x)
        throw config_error("count limit " + std::to_string(x_limit) + " exceeds configured maximum " +
                           std::to_string(config_.max_x));
    if (config_.segment_size < EngineConfig::min_segment_size)
        throw config_error("segment size must be at least " + std::to_string(EngineConfig::min_segment_size));
    if (config_.workers == 0)
        throw config_error("worker count must be at least 1");
    primes_ = std::make_shared<const PrimeSource>(x_limit + 1, config_.workers);
    auto all = primes_->primes_up_to(std::min(config_.segment_size + 1, primes_->bound()));
    for (std::uint32_t p : all)
        if (p != 2)
            stride_primes_.push_back(p);
}

void CountEngine::accumulate(SegmentPlan& plan) const {
    check_bounds(plan.lo, plan.hi, *primes_);
    plan.segment_size = config_.segment_size;
    plan.accumulator.resize(plan.hi - plan.lo);
    accumulate_range(plan.lo, plan.hi, *primes_, stride_primes_, config_.segment_size, plan.accumulator.data());
}

u64 CountEngine::count_segment(u64 lo, u64 hi) const {
    SegmentPlan plan{lo, hi, 0, {}};
    accumulate(plan);
    return flag_members(lo, plan.accumulator, {});
}

void CountEngine::segment_membership(u64 lo, u64 hi, std::span<std::uint8_t> out) const {
    if (out.size() < hi - lo)
        throw range_error("membership buffer too small");
    SegmentPlan plan{lo, hi, 0, {}};
    accumulate(plan);
    flag_members(lo, plan.accumulator, out);
}

CountSeries CountEngine::count_up_to(u64 x, std::span<const u64> checkpoints, CheckpointSink* sink,
                                     ContinuationState const* from) const {
    if (x > x_limit_)
        throw range_error("count target " + std::to_string(x) + " exceeds engine limit " + std::to_string(x_limit_));

    CountSeries result = from ? from->series : CountSeries{};
    u64 const start = from ? from->next_n : 1;
    u64 const base = from ? from->base_count : 0;
    if (x < start)
        return result;

    std::vector<u64> cps;
    for (u64 c : checkpoints) {
        if (c > x)
            throw range_error("checkpoint " + std::to_string(c) + " beyond count target " + std::to_string(x));
        if (c >= start)
            cps.push_back(c);
    }
    cps.push_back(x);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

    u64 const seg = config_.segment_size;
    u64 const n_segments = ceil_div(x + 1 - start, seg);
    unsigned const n_workers = static_cast<unsigned>(std::min<u64>(config_.workers, n_segments));

    std::vector<u64> seg_count(n_segments, 0);
    std::vector<u64> cp_partial(cps.size(), 0); // members in [segment lo, checkpoint]
    std::vector<std::uint8_t> done(n_segments, 0);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<u64> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr worker_error;

    auto work = [&] {
        SegmentPlan plan;
        try {
            for (u64 s = next++; s < n_segments && !stop; s = next++) {
                plan.lo = start + s * seg;
                plan.hi = std::min(plan.lo + seg, x + 1);
                accumulate(plan);
                u64 const count = flag_members(plan.lo, plan.accumulator, {});
                auto it = std::lower_bound(cps.begin(), cps.end(), plan.lo);
                for (; it != cps.end() && *it < plan.hi; ++it) {
                    u64 partial = 0;
                    for (u64 n = plan.lo; n <= *it; ++n)
                        partial += plan.accumulator[n - plan.lo] == n;
                    cp_partial[static_cast<std::size_t>(it - cps.begin())] = partial;
                }
                std::lock_guard lock(mu);
                seg_count[s] = count;
                done[s] = 1;
                cv.notify_all();
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!worker_error)
                worker_error = std::current_exception();
            stop = true;
            cv.notify_all();
        }
    };

    auto const t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t)
        pool.emplace_back(work);

    std::exception_ptr emit_error;
    u64 running = base;
    std::size_t cp_idx = 0;
    try {
        for (u64 s = 0; s < n_segments; ++s) {
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return done[s] || worker_error; });
                if (worker_error)
                    break;
            }
            u64 const hi = std::min(start + s * seg + seg, x + 1);
            for (; cp_idx < cps.size() && cps[cp_idx] < hi; ++cp_idx) {
                CountCheckpoint c;
                c.x = cps[cp_idx];
                c.v_lambda = running + cp_partial[cp_idx];
                c.eta_hat = eta_hat(c.x, c.v_lambda);
                c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                c.segment_size = seg;
                c.workers = config_.workers;
                if (sink)
                    sink->emit(c);
                result.records.push_back(c);
            }
            running += seg_count[s];
        }
    } catch (...) {
        emit_error = std::current_exception();
        stop = true;
    }
    for (auto& t : pool)
        t.join();
    if (emit_error)
        std::rethrow_exception(emit_error);
    if (worker_error)
        std::rethrow_exception(worker_error);
    return result;
}

} // namespace vlambda
