#include "vlambda/prime_source.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vlambda/errors.hpp"

namespace vlambda {

namespace {

std::vector<std::uint32_t> simple_odd_primes(u64 limit) {
    std::vector<char> composite(limit + 1, 0);
    std::vector<std::uint32_t> out;
    for (u64 i = 3; i <= limit; i += 2) {
        if (composite[i])
            continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (u64 j = i * i; j <= limit; j += 2 * i)
            composite[j] = 1;
    }
    return out;
}

constexpr u64 words_per_block = 1u << 13; // 2^19 odd numbers per block

} // namespace

PrimeSource::PrimeSource(u64 bound, unsigned workers) : bound_(bound) {
    if (bound < 2)
        throw config_error("prime source bound must be at least 2");
    u64 const odd_count = (bound + 1) / 2; // odd n <= bound
    u64 const words = (odd_count + 63) / 64;
    bits_.assign(words, ~u64{0});

    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(bound)));
    while (root * root > bound)
        --root;
    while ((root + 1) * (root + 1) <= bound)
        ++root;
    std::vector<std::uint32_t> const base = simple_odd_primes(root);

    u64 const blocks = (words + words_per_block - 1) / words_per_block;
    std::atomic<u64> next{0};
    auto work = [&] {
        for (u64 b = next++; b < blocks; b = next++) {
            u64 const w0 = b * words_per_block;
            u64 const w1 = std::min(words, w0 + words_per_block);
            u64 const i0 = w0 * 64; // first odd index in block
            u64 const i1 = w1 * 64;
            for (std::uint32_t p : base) {
                // odd multiples m = p*(2t+1) >= p*p, index (m-1)/2
                u64 const start_idx = (u64{p} * p) / 2;
                u64 idx;
                if (start_idx >= i0) {
                    idx = start_idx;
                } else {
                    // smallest idx >= i0 with idx ≡ p/2 (mod p)
                    u64 const r = (p / 2) % p;
                    u64 const off = (i0 % p <= r) ? r - i0 % p : p - (i0 % p - r);
                    idx = i0 + off;
                }
                for (; idx < i1; idx += p)
                    bits_[idx >> 6] &= ~(u64{1} << (idx & 63));
            }
        }
    };
    unsigned const n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    bits_[0] &= ~u64{1}; // 1 is not prime
    // Clear indices past bound.
    for (u64 i = odd_count; i < words * 64; ++i)
        bits_[i >> 6] &= ~(u64{1} << (i & 63));
}

std::vector<std::uint32_t> PrimeSource::primes_up_to(u64 limit) const {
    if (limit > bound_)
        throw range_error("primes_up_to beyond prime source bound");
    std::vector<std::uint32_t> out;
    for_each_prime(2, limit + 1, [&](u64 p) { out.push_back(static_cast<std::uint32_t>(p)); });
    return out;
}

u64 PrimeSource::count_primes(u64 x) const {
    if (x > bound_)
        throw range_error("count_primes beyond prime source bound");
    if (x < 2)
        return 0;
    u64 count = 1; // the prime 2
    u64 const last = (x + 1) / 2; // exclusive odd index: odd n <= x
    u64 const full = last >> 6;
    for (u64 w = 0; w < full; ++w)
        count += static_cast<u64>(std::popcount(bits_[w]));
    if (last & 63)
        count += static_cast<u64>(std::popcount(bits_[full] & (~u64{0} >> (64 - (last & 63)))));
    return count;
}

} // namespace vlambda
