#include "vlambda/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vlambda/count_engine.hpp"
#include "vlambda/errors.hpp"
#include "vlambda/prime_source.hpp"

namespace vlambda {

double eta_constant() {
    double const l2 = std::numbers::ln2;
    return 1.0 - (1.0 + std::log(l2)) / l2;
}

double alpha_constant() { return 1.0 - std::numbers::e * std::numbers::ln2 / 2.0; }

double beta_k(unsigned k) {
    if (k < 2 || k > 1000)
        throw domain_error("beta_k needs k >= 2");
    double const parts = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
    double const lp = std::log(parts);
    return 1.0 - k / lp * (1.0 + std::log(lp) - std::log(static_cast<double>(k)));
}

std::vector<BetaRow> beta_convergence(unsigned k_max) {
    if (k_max < 2 || k_max > 60)
        throw domain_error("beta_convergence needs 2 <= k_max <= 60");
    double const eta = eta_constant();
    std::vector<BetaRow> rows;
    for (unsigned k = 2; k <= k_max; ++k) {
        double b = beta_k(k);
        rows.push_back({k, b, b - eta});
    }
    return rows;
}

ExponentReport constants(unsigned k_max) {
    ExponentReport r;
    r.eta = eta_constant();
    r.alpha = alpha_constant();
    r.beta = beta_convergence(k_max);
    return r;
}

double f_value(unsigned k, double t) {
    double const kk = k;
    double const inner = std::exp2(2 * kk - t) - std::exp2(kk + 1 - t) + 1.0;
    return kk * std::log(inner) - (2 * kk - t) * std::log(std::exp2(kk) - 1.0);
}

double f_second_derivative(unsigned k, double t) {
    double const kk = k;
    double const l2 = std::numbers::ln2;
    double const inner = std::exp2(2 * kk - t) - std::exp2(kk + 1 - t) + 1.0;
    double const a = std::exp2(2 * kk) - std::exp2(kk + 1);
    return kk * l2 * l2 * a * std::exp2(-t) / (inner * inner);
}

FProfile f_profile(unsigned k, std::size_t grid_points) {
    if (k < 2)
        throw domain_error("f_profile needs k >= 2");
    if (grid_points < 3)
        throw domain_error("f_profile needs at least 3 grid points");
    double const step = static_cast<double>(k) / static_cast<double>(grid_points - 1);
    std::vector<double> f(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        f[i] = f_value(k, i == grid_points - 1 ? static_cast<double>(k) : step * static_cast<double>(i));

    FProfile p;
    p.f0 = f.front();
    p.fk = f.back();
    p.interior_min = f[1];
    p.interior_max = f[1];
    p.second_derivative_min = f_second_derivative(k, 0.0);
    p.second_difference_min = (f[2] - 2 * f[1] + f[0]) / (step * step);
    for (std::size_t i = 1; i + 1 < grid_points; ++i) {
        p.interior_min = std::min(p.interior_min, f[i]);
        p.interior_max = std::max(p.interior_max, f[i]);
        p.second_difference_min = std::min(p.second_difference_min, (f[i + 1] - 2 * f[i] + f[i - 1]) / (step * step));
    }
    for (std::size_t i = 0; i < grid_points; ++i)
        p.second_derivative_min = std::min(p.second_derivative_min, f_second_derivative(k, step * static_cast<double>(i)));
    return p;
}

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
    long double sum = 0;
    long double carry = 0;

    void add(long double v) {
        long double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + carry; }
};

} // namespace

std::vector<long double> prime_power_sums(u64 x, unsigned h) {
    if (x > 100'000'000)
        throw range_error("prime power sums limited to x <= 10^8");
    std::vector<long double> out(h, 0);
    if (x < 2)
        return out;
    PrimeSource primes(x);
    std::vector<CompensatedSum> acc(h);
    primes.for_each_prime(2, x + 1, [&](u64 p) {
        long double const inv = 1.0L / static_cast<long double>(p);
        long double term = inv;
        for (unsigned j = 0; j < h; ++j) {
            acc[j].add(term);
            term *= inv;
        }
    });
    for (unsigned j = 0; j < h; ++j)
        out[j] = acc[j].value();
    return out;
}

long double elementary_symmetric(std::vector<long double> const& power_sums, unsigned h) {
    if (power_sums.size() < h)
        throw domain_error("need h power sums for e_h");
    std::vector<long double> e(h + 1, 0);
    e[0] = 1;
    for (unsigned n = 1; n <= h; ++n) {
        long double s = 0;
        for (unsigned i = 1; i <= n; ++i) {
            long double term = e[n - i] * power_sums[i - 1];
            s += (i % 2 == 1) ? term : -term;
        }
        e[n] = s / n;
    }
    return e[h];
}

Lemma1Ratio lemma1_ratio(u64 x, unsigned h) {
    if (x > 100'000'000)
        throw range_error("lemma1_ratio limited to x <= 10^8");
    if (x < 16)
        throw domain_error("lemma1_ratio needs x >= 16");
    long double const llx = std::log(std::log(static_cast<long double>(x)));
    if (h < 1 || static_cast<long double>(h) > 2 * llx)
        throw domain_error("h = " + std::to_string(h) + " outside 1 <= h <= 2 log log x");
    Lemma1Ratio r;
    r.exact_sum = elementary_symmetric(prime_power_sums(x, h), h);
    r.reference = std::pow(llx, static_cast<long double>(h)) / std::tgamma(static_cast<long double>(h) + 1);
    r.ratio = r.exact_sum / r.reference;
    return r;
}

std::vector<FitRow> exponent_fit(CountSeries const& series) {
    std::vector<FitRow> rows;
    for (auto const& c : series.records)
        rows.push_back({c.x, c.v_lambda, eta_hat(c.x, c.v_lambda)});
    return rows;
}

OmegaDistribution omega_distribution(u64 x, PrimeTables const& tables) {
    if (x > 10'000'000)
        throw range_error("omega_distribution limited to x <= 10^7");
    if (x < 1)
        throw domain_error("omega_distribution needs x >= 1");
    if (x > tables.limit())
        throw range_error("omega_distribution needs tables covering x");
    PrimeSource primes(x + 1);
    std::vector<std::uint8_t> member(x);
    segment_membership(1, x + 1, primes, member);

    u64 total_all = 0, total_image = 0, image = 0;
    for (u64 n = 2; n <= x; ++n) {
        unsigned w = 0;
        for (u64 m = n; m > 1;) {
            u64 p = tables.smallest_prime_factor(m);
            ++w;
            while (m % p == 0)
                m /= p;
        }
        total_all += w;
        if (member[n - 1]) {
            total_image += w;
            ++image;
        }
    }
    image += member[0]; // n = 1, omega 0
    OmegaDistribution d;
    d.image_size = image;
    d.mean_omega_image = image ? static_cast<double>(total_image) / static_cast<double>(image) : 0.0;
    d.mean_omega_all = static_cast<double>(total_all) / static_cast<double>(x);
    double const lx = std::log(static_cast<double>(x));
    d.reference = lx > 1.0 ? std::log(lx) / std::numbers::ln2 : 0.0;
    return d;
}

u64 mult_table_count(u64 n) {
    if (n < 1 || n > (u64{1} << 14))
        throw range_error("mult_table_count needs 1 <= n <= 2^14");
    std::vector<u64> seen((n * n) / 64 + 1, 0);
    u64 count = 0;
    for (u64 i = 1; i <= n; ++i)
        for (u64 j = i; j <= n; ++j) {
            u64 const v = i * j;
            u64& word = seen[v >> 6];
            u64 const bit = u64{1} << (v & 63);
            if (!(word & bit)) {
                word |= bit;
                ++count;
            }
        }
    return count;
}

double mult_table_exponent(u64 n, u64 count) {
    if (n < 16 || count == 0)
        return std::nan("");
    double const nn = static_cast<double>(n);
    return std::log(nn * nn / static_cast<double>(count)) / std::log(std::log(nn));
}

namespace {

double phi_lower(double m) {
    double const ll = std::log(std::log(m));
    return m / (std::exp(std::numbers::egamma) * ll + 3.0 / ll);
}

} // namespace

u64 phi_search_bound(u64 x) {
    // phi_lower is increasing on m >= 3; find the least M >= 2 with
    // phi_lower(M + 1) > x.
    double const target = static_cast<double>(x) * (1.0 + 1e-12) + 1.0;
    u64 lo = 2, hi = 16;
    while (phi_lower(static_cast<double>(hi + 1)) <= target)
        hi *= 2;
    while (lo < hi) {
        u64 mid = lo + (hi - lo) / 2;
        if (phi_lower(static_cast<double>(mid + 1)) > target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

u64 phi_image_count(u64 x) {
    if (x > 10'000'000)
        throw range_error("phi_image_count limited to x <= 10^7");
    if (x < 1)
        return 0;
    u64 const bound = phi_search_bound(x);
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(bound))) + 1;
    PrimeSource primes(std::max<u64>(root, 2));
    std::vector<std::uint32_t> const base = primes.primes_up_to(root);

    std::vector<std::uint8_t> seen(x + 1, 0);
    constexpr u64 seg = u64{1} << 18;
    std::vector<u64> phi(seg), rest(seg);
    for (u64 lo = 1; lo <= bound; lo += seg) {
        u64 const hi = std::min(lo + seg, bound + 1);
        for (u64 m = lo; m < hi; ++m) {
            phi[m - lo] = m;
            rest[m - lo] = m;
        }
        for (std::uint32_t p : base) {
            if (u64{p} >= hi)
                break;
            for (u64 m = ((lo + p - 1) / p) * p; m < hi; m += p) {
                phi[m - lo] -= phi[m - lo] / p;
                do
                    rest[m - lo] /= p;
                while (rest[m - lo] % p == 0);
            }
        }
        for (u64 m = lo; m < hi; ++m) {
            u64 v = phi[m - lo];
            if (rest[m - lo] > 1)
                v -= v / rest[m - lo];
            if (v <= x)
                seen[v] = 1;
        }
    }
    u64 count = 0;
    for (u64 v = 1; v <= x; ++v)
        count += seen[v];
    return count;
}

} // namespace vlambda
