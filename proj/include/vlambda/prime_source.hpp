#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "vlambda/arith.hpp"

namespace vlambda {

/// Odd-only primality bitmap over [1, bound], built by a segmented sieve
/// of Eratosthenes. One bit per odd number: bound / 16 bytes.
/// Immutable after construction and shared by concurrent count workers.
class PrimeSource {
public:
    /// Sieves with up to `workers` threads.
    explicit PrimeSource(u64 bound, unsigned workers = 1);

    u64 bound() const noexcept { return bound_; }

    /// Requires n <= bound.
    bool is_prime(u64 n) const noexcept {
        if (n % 2 == 0)
            return n == 2;
        u64 i = n >> 1;
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }

    /// Calls fn(p) for every prime p in [lo, hi), ascending. Requires
    /// hi <= bound + 1.
    template <class Fn>
    void for_each_prime(u64 lo, u64 hi, Fn&& fn) const {
        if (lo >= hi)
            return;
        if (lo <= 2 && 2 < hi)
            fn(u64{2});
        u64 first = lo / 2;
        u64 last = hi / 2; // exclusive odd index
        if (first >= last)
            return;
        u64 w = first >> 6;
        u64 word = bits_[w] & (~u64{0} << (first & 63));
        u64 const w_end = (last - 1) >> 6;
        for (;;) {
            if (w == w_end) {
                u64 tail = (last & 63) ? (~u64{0} >> (64 - (last & 63))) : ~u64{0};
                word &= tail;
            }
            while (word) {
                u64 i = (w << 6) + static_cast<u64>(std::countr_zero(word));
                fn(2 * i + 1);
                word &= word - 1;
            }
            if (w == w_end)
                break;
            word = bits_[++w];
        }
    }

    /// Ascending primes in [2, limit]; limit <= bound.
    std::vector<std::uint32_t> primes_up_to(u64 limit) const;

    /// pi(x) for x <= bound.
    u64 count_primes(u64 x) const;

private:
    u64 bound_;
    std::vector<u64> bits_;
};

} // namespace vlambda
