#pragma once

/// @file analytics.hpp
/// @brief Exponent constants, symmetric prime sums and comparison counts.

#include <cstddef>
#include <utility>
#include <vector>

#include "vlambda/arith.hpp"
#include "vlambda/series.hpp"

namespace vlambda {

/// 1 - (1 + log log 2) / log 2.
double eta_constant();
/// 1 - e log 2 / 2.
double alpha_constant();
/// Exponent of the earlier lower bound x / (log x)^c.
inline constexpr double lp_lower_exponent = 0.359052;
/// 1 - k / log(2^k - 1) * (1 + log log(2^k - 1) - log k), for k >= 2.
double beta_k(unsigned k);

struct BetaRow {
    unsigned k = 0;
    double beta = 0;
    double gap = 0; ///< beta - eta
};

struct ExponentReport {
    double eta = 0;
    double alpha = 0;
    double lp_lower = lp_lower_exponent;
    std::vector<BetaRow> beta;
    std::vector<std::pair<u64, double>> eta_hat_series;
};

/// Constants with beta_k for 2 <= k <= k_max; no series.
ExponentReport constants(unsigned k_max = 10);
/// Requires 2 <= k_max <= 60.
std::vector<BetaRow> beta_convergence(unsigned k_max);

/// f(t) = k log(2^(2k-t) - 2^(k+1-t) + 1) - (2k - t) log(2^k - 1) on [0, k].
double f_value(unsigned k, double t);
/// Closed-form f''(t).
double f_second_derivative(unsigned k, double t);

struct FProfile {
    double f0 = 0;
    double fk = 0;
    double interior_min = 0;
    double interior_max = 0;    ///< < 0 means f is negative on every interior point
    double second_derivative_min = 0;
    double second_difference_min = 0; ///< same sign check from f values alone
};

/// Evaluates f on grid_points equally spaced t in [0, k] (endpoints
/// included). Requires k >= 2 and grid_points >= 3.
FProfile f_profile(unsigned k, std::size_t grid_points);

/// Power sums P_j = sum_{p <= x} p^(-j), j = 1..h, accumulated with
/// compensated summation in long double.
std::vector<long double> prime_power_sums(u64 x, unsigned h);
/// e_h from power sums via Newton's identities.
long double elementary_symmetric(std::vector<long double> const& power_sums, unsigned h);

struct Lemma1Ratio {
    long double exact_sum = 0; ///< sum of mu^2(b)/b over b with P+(b) <= x, omega(b) = h
    long double reference = 0; ///< (log log x)^h / h!
    long double ratio = 0;
};

/// Requires 1 <= h <= 2 log log x and x <= 10^8 (domain_error / range_error).
Lemma1Ratio lemma1_ratio(u64 x, unsigned h);

struct FitRow {
    u64 x = 0;
    u64 v_lambda = 0;
    double eta_hat = 0;
};

/// eta_hat(x) = log(x / V) / log log x per checkpoint. Reported, not judged.
std::vector<FitRow> exponent_fit(CountSeries const& series);

struct OmegaDistribution {
    double mean_omega_image = 0;
    double mean_omega_all = 0;
    double reference = 0; ///< log log x / log 2
    u64 image_size = 0;
};

/// x <= 10^7.
OmegaDistribution omega_distribution(u64 x, PrimeTables const& tables);

/// Distinct products i j with 1 <= i <= j <= n; n <= 2^14.
u64 mult_table_count(u64 n);
/// log(n^2 / count) / log log n, for n >= 16.
double mult_table_exponent(u64 n, u64 count);

/// Search bound M(x): phi(m) > x for every m > M(x), from
/// phi(m) > m / (e^gamma log log m + 3 / log log m), m >= 3.
u64 phi_search_bound(u64 x);
/// Distinct values of phi that are <= x; x <= 10^7.
u64 phi_image_count(u64 x);

} // namespace vlambda
