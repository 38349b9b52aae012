#include "vlambda/construction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "vlambda/errors.hpp"

namespace vlambda {

RepresentationParams params_for_log(double log_x, unsigned k) {
    if (k < 2 || k > 62)
        throw domain_error("representation parameters need 2 <= k <= 62");
    if (!(log_x >= std::log(16.0)))
        throw domain_error("representation parameters need x >= 16");
    RepresentationParams p;
    p.k = k;
    p.log_x = log_x;
    p.x = std::exp(log_x); // inf beyond double range; log_x stays exact
    p.log_y = log_x / (200.0 * k * std::log(log_x));
    p.y = std::exp(p.log_y);
    p.l = static_cast<long long>(std::floor(l_coefficient(k) * std::log(p.log_y)));
    p.degenerate = p.y < 3.0 || p.l < 1;
    p.relaxations = Relaxations::strict();
    return p;
}

RepresentationParams params_for(double x, unsigned k) {
    if (!(x >= 16.0))
        throw domain_error("representation parameters need x >= 16");
    RepresentationParams p = params_for_log(std::log(x), k);
    p.x = x;
    return p;
}

double l_coefficient(unsigned k) {
    double const parts = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
    return k / (parts * std::log(parts));
}

std::vector<std::vector<unsigned>> index_sets(unsigned k) {
    if (k < 2 || k > 16)
        throw domain_error("index_sets needs 2 <= k <= 16");
    unsigned const top = (1u << k) - 1;
    std::vector<std::vector<unsigned>> sets(k);
    for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 1; j <= top; ++j)
            if ((j >> i) & 1u)
                sets[i].push_back(j);
    return sets;
}

namespace {

struct SearchContext {
    std::span<const u64> primes;
    RepresentationParams const* params;
    PrimeTables const* tables;
    unsigned k;
    unsigned w;
    std::size_t max_results;
    RepresentationSearch* out;
};

u64 binom_small(unsigned n, long long r) {
    if (r < 0 || r > n)
        return 0;
    u64 acc = 1;
    for (long long i = 1; i <= r; ++i)
        acc = acc * (n - r + i) / i;
    return acc;
}

// Divisors d of n containing the prime 2 with d + 1 prime, as prime masks.
void collect_candidates(SearchContext const& ctx, unsigned two_index, std::vector<std::uint32_t>& masks,
                        std::vector<u64>& values) {
    std::vector<unsigned> others;
    for (unsigned t = 0; t < ctx.w; ++t)
        if (t != two_index)
            others.push_back(t);
    // Iterative DFS over subsets of the odd primes.
    struct Frame {
        std::size_t next;
        std::uint32_t mask;
        u64 value;
    };
    std::vector<Frame> stack{{0, 1u << two_index, 2}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (is_prime(f.value + 1, *ctx.tables)) {
            masks.push_back(f.mask);
            values.push_back(f.value);
        }
        for (std::size_t i = f.next; i < others.size(); ++i) {
            unsigned t = others[i];
            stack.push_back({i + 1, f.mask | (1u << t), f.value * ctx.primes[t]});
        }
    }
}

// Number of admissible choices of which singleton primes of part i go to
// b_{2^i} (the rest form a_i), given the constraints.
u64 singleton_options(std::vector<unsigned> const& singles, SearchContext const& ctx) {
    auto const& rel = ctx.params->relaxations;
    unsigned const s = static_cast<unsigned>(singles.size());
    if (s == 0)
        return 0;
    if (rel.enforce_smooth_rough_split) {
        long long smooth = 0;
        for (unsigned t : singles)
            smooth += static_cast<double>(ctx.primes[t]) <= ctx.params->y;
        if (smooth == static_cast<long long>(s))
            return 0; // a_i would be empty
        if (rel.enforce_omega_l && smooth != ctx.params->l)
            return 0;
        return 1;
    }
    if (rel.enforce_omega_l) {
        if (ctx.params->l < 0 || ctx.params->l >= static_cast<long long>(s))
            return 0;
        return binom_small(s, ctx.params->l);
    }
    return (u64{1} << s) - 1;
}

bool choice_allowed(std::vector<unsigned> const& singles, std::uint32_t chosen, SearchContext const& ctx) {
    auto const& rel = ctx.params->relaxations;
    unsigned const s = static_cast<unsigned>(singles.size());
    if (std::popcount(chosen) == static_cast<int>(s))
        return false;
    if (rel.enforce_omega_l && std::popcount(chosen) != ctx.params->l)
        return false;
    if (rel.enforce_smooth_rough_split)
        for (unsigned idx = 0; idx < s; ++idx) {
            bool smooth = static_cast<double>(ctx.primes[singles[idx]]) <= ctx.params->y;
            if (smooth != static_cast<bool>((chosen >> idx) & 1u))
                return false;
        }
    return true;
}

void emit_representations(std::vector<std::uint32_t> const& support, std::vector<std::vector<unsigned>> const& singles,
                          SearchContext const& ctx) {
    unsigned const k = ctx.k;
    unsigned const parts = (1u << k) - 1;
    std::vector<std::uint32_t> choice(k, 0);
    // Mixed-radix walk over subsets of each part's singletons.
    for (;;) {
        bool ok = true;
        for (unsigned i = 0; i < k && ok; ++i)
            ok = choice_allowed(singles[i], choice[i], ctx);
        if (ok) {
            Representation rep;
            rep.k = k;
            rep.a.assign(k, 1);
            rep.b.assign(parts, 1);
            for (unsigned t = 0; t < ctx.w; ++t)
                if (std::popcount(support[t]) >= 2)
                    rep.b[support[t] - 1] *= ctx.primes[t];
            for (unsigned i = 0; i < k; ++i)
                for (unsigned idx = 0; idx < singles[i].size(); ++idx) {
                    u64 p = ctx.primes[singles[i][idx]];
                    if ((choice[i] >> idx) & 1u)
                        rep.b[(1u << i) - 1] *= p;
                    else
                        rep.a[i] *= p;
                }
            rep.n = 1;
            for (u64 v : rep.a)
                rep.n *= v;
            for (u64 v : rep.b)
                rep.n *= v;
            rep.B.assign(k, 1);
            for (unsigned i = 0; i < k; ++i) {
                for (unsigned j = 1; j <= parts; ++j)
                    if ((j >> i) & 1u)
                        rep.B[i] *= rep.b[j - 1];
                rep.q.push_back(rep.a[i] * rep.B[i] + 1);
            }
            ctx.out->representations.push_back(std::move(rep));
            if (ctx.out->representations.size() >= ctx.max_results)
                return;
        }
        unsigned i = 0;
        for (; i < k; ++i) {
            if (++choice[i] < (1u << singles[i].size()))
                break;
            choice[i] = 0;
        }
        if (i == k)
            return;
    }
}

void evaluate_tuple(std::vector<std::uint32_t> const& tuple, SearchContext const& ctx) {
    unsigned const k = ctx.k;
    auto const& rel = ctx.params->relaxations;
    std::vector<std::uint32_t> support(ctx.w, 0);
    for (unsigned i = 0; i < k; ++i)
        for (unsigned t = 0; t < ctx.w; ++t)
            if ((tuple[i] >> t) & 1u)
                support[t] |= 1u << i;

    std::vector<std::vector<unsigned>> singles(k);
    std::vector<long long> multi_size(1u << k, 0);
    for (unsigned t = 0; t < ctx.w; ++t) {
        if (std::popcount(support[t]) == 1) {
            singles[static_cast<unsigned>(std::countr_zero(support[t]))].push_back(t);
        } else {
            if (rel.enforce_smooth_rough_split && static_cast<double>(ctx.primes[t]) > ctx.params->y)
                return; // a rough prime cannot sit in a shared part
            ++multi_size[support[t]];
        }
    }
    if (rel.enforce_omega_l)
        for (unsigned j = 1; j < (1u << k); ++j)
            if (std::popcount(j) >= 2 && multi_size[j] != ctx.params->l)
                return;
    // The prime 2 lies in every candidate d_i, hence in b_{2^k-1}: the
    // even-last condition holds for every tuple reaching this point.

    u64 ways = 1;
    for (unsigned i = 0; i < k && ways; ++i)
        ways = mul_checked(ways, singleton_options(singles[i], ctx));
    if (ways == 0)
        return;
    ctx.out->count += ways;
    if (ctx.out->representations.size() < ctx.max_results)
        emit_representations(support, singles, ctx);
}

} // namespace

RepresentationSearch find_representations(std::span<const u64> primes, RepresentationParams const& params,
                                          std::size_t max_results, PrimeTables const& tables) {
    unsigned const k = params.k;
    if (k < 2 || k > max_search_k)
        throw domain_error("representation search needs 2 <= k <= " + std::to_string(max_search_k));
    if (primes.size() > max_search_omega)
        throw complexity_error("representation search limited to omega(n) <= " + std::to_string(max_search_omega));
    std::vector<u64> sorted(primes.begin(), primes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw domain_error("representation search needs squarefree n");

    RepresentationSearch result;
    u64 n = 1;
    for (u64 p : primes)
        n = mul_checked(n, p);

    auto const& rel = params.relaxations;
    if (rel.enforce_range) {
        double const lower = params.x / std::ldexp(1.0, static_cast<int>(2 * k));
        if (!(static_cast<double>(n) > lower && static_cast<double>(n) <= params.x))
            return result;
    }
    auto two = std::find(primes.begin(), primes.end(), u64{2});
    if (two == primes.end())
        return result; // every d_i = a_i B_i must be even for d_i + 1 to be an odd prime
    if (rel.enforce_omega_l && params.l < 0)
        return result;

    SearchContext ctx{primes, &params, &tables, k, static_cast<unsigned>(primes.size()), max_results, &result};
    std::vector<std::uint32_t> masks;
    std::vector<u64> values;
    collect_candidates(ctx, static_cast<unsigned>(two - primes.begin()), masks, values);
    if (masks.empty())
        return result;

    double const work = std::pow(static_cast<double>(masks.size()), static_cast<double>(k - 1));
    if (work > 2e9)
        throw complexity_error("representation search would visit " + std::to_string(work) + " tuples");

    std::uint32_t const full = ctx.w == 32 ? ~0u : ((1u << ctx.w) - 1);
    std::vector<std::uint32_t> tuple(k);
    // Depth-first over ordered k-tuples of candidates whose union is n.
    auto rec = [&](auto&& self, unsigned depth, std::uint32_t covered) -> void {
        if (depth + 1 == k) {
            std::uint32_t const missing = full & ~covered;
            for (std::size_t c = 0; c < masks.size(); ++c) {
                if ((masks[c] & missing) != missing)
                    continue;
                tuple[depth] = masks[c];
                evaluate_tuple(tuple, ctx);
            }
            return;
        }
        for (std::size_t c = 0; c < masks.size(); ++c) {
            tuple[depth] = masks[c];
            self(self, depth + 1, covered | masks[c]);
        }
    };
    rec(rec, 0, 0);
    return result;
}

RepresentationSearch find_representations(u64 n, RepresentationParams const& params, std::size_t max_results,
                                          PrimeTables const& tables) {
    Factorization f = factor(n, tables);
    if (mobius(f) == 0)
        throw domain_error(std::to_string(n) + " is not squarefree");
    if (f.size() > max_search_omega)
        throw complexity_error("representation search limited to omega(n) <= " + std::to_string(max_search_omega));
    std::vector<u64> primes;
    for (auto const& pp : f.factors())
        primes.push_back(pp.prime);
    return find_representations(primes, params, max_results, tables);
}

bool verify_representation(Representation const& rep, PrimeTables const& tables) {
    std::vector<u64> q = rep.q;
    if (q.empty())
        return false;
    std::sort(q.begin(), q.end());
    if (std::adjacent_find(q.begin(), q.end()) != q.end())
        return false;
    try {
        for (u64 v : q)
            if (!is_prime(v, tables))
                return false;
        std::vector<PrimePower> pp;
        for (u64 v : q)
            pp.push_back({v, 1});
        return carmichael_lambda(Factorization(std::move(pp))) == rep.n;
    } catch (overflow_error const&) {
        return false;
    }
}

S1S2Report empirical_s1_s2(u64 x, unsigned k, RepresentationParams const& params, PrimeTables const& tables,
                           unsigned workers) {
    if (x > 100'000)
        throw complexity_error("empirical S1/S2 scan limited to x <= 100000");
    if (params.k != k)
        throw domain_error("parameter k does not match requested k");
    u64 const lo = x >> (2 * k); // n > x / 2^(2k)
    workers = std::max(1u, workers);

    struct Partial {
        u64 s1 = 0, s2 = 0, positive = 0;
    };
    std::vector<Partial> partials(workers);
    auto work = [&](unsigned id) {
        Partial& acc = partials[id];
        for (u64 n = lo + 1 + id; n <= x; n += workers) {
            Factorization f = factor(n, tables);
            if (mobius(f) == 0)
                continue;
            std::vector<u64> primes;
            for (auto const& pp : f.factors())
                primes.push_back(pp.prime);
            u64 r = find_representations(primes, params, 0, tables).count;
            acc.s1 += r;
            acc.s2 += r * r;
            acc.positive += r > 0;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t)
        pool.emplace_back(work, t);
    work(0);
    for (auto& t : pool)
        t.join();

    S1S2Report rep;
    for (auto const& p : partials) {
        rep.s1 += p.s1;
        rep.s2 += p.s2;
        rep.positive_count += p.positive;
    }
    rep.cauchy_bound = rep.s2 == 0 ? 0.0 : static_cast<double>(rep.s1) * static_cast<double>(rep.s1) / rep.s2;
    rep.cauchy_holds = u128{rep.positive_count} * rep.s2 >= u128{rep.s1} * rep.s1;
    return rep;
}

std::vector<u64> b_v_partition(unsigned k, unsigned m, std::span<const u64> b_list) {
    if (k < 1 || k > 16 || m > k)
        throw domain_error("b_v_partition needs 0 <= m <= k <= 16");
    if (b_list.size() != (std::size_t{1} << k) - 1)
        throw domain_error("b_v_partition needs exactly 2^k - 1 parts");
    std::vector<u64> classes(std::size_t{1} << m, 1);
    u64 const low = (u64{1} << m) - 1;
    for (std::size_t j = 1; j <= b_list.size(); ++j)
        classes[j & low] = mul_checked(classes[j & low], b_list[j - 1]);
    return classes;
}

namespace {

std::vector<u64> low_products(unsigned m, std::span<const u64> b_list) {
    std::vector<u64> out(m, 1);
    for (unsigned i = 0; i < m; ++i)
        for (std::size_t j = 1; j <= b_list.size(); ++j)
            if ((j >> i) & 1u)
                out[i] = mul_checked(out[i], b_list[j - 1]);
    return out;
}

} // namespace

u64 DualFactorization::product() const {
    u64 r = 1;
    for (u64 p : primes)
        r = mul_checked(r, p);
    return r;
}

DualFactorization make_dual_factorization(unsigned k, unsigned m, std::span<const u64> primes,
                                          std::span<const std::pair<unsigned, unsigned>> assignments) {
    if (k < 1 || k > 16 || m > k)
        throw domain_error("dual factorization needs 0 <= m <= k <= 16");
    if (primes.size() != assignments.size())
        throw domain_error("one index pair per prime required");
    unsigned const parts = (1u << k) - 1;
    DualFactorization d;
    d.k = k;
    d.m = m;
    d.primes.assign(primes.begin(), primes.end());
    d.assignments.assign(assignments.begin(), assignments.end());
    d.b.assign(parts, 1);
    d.b_dual.assign(parts, 1);
    for (std::size_t t = 0; t < primes.size(); ++t) {
        auto [j, jd] = assignments[t];
        if (j < 1 || j > parts || jd < 1 || jd > parts)
            throw domain_error("part index out of range");
        d.b[j - 1] = mul_checked(d.b[j - 1], primes[t]);
        d.b_dual[jd - 1] = mul_checked(d.b_dual[jd - 1], primes[t]);
    }
    d.B_v = b_v_partition(k, m, d.b);
    d.B_v_dual = b_v_partition(k, m, d.b_dual);
    d.B_low = low_products(m, d.b);
    d.B_low_dual = low_products(m, d.b_dual);
    return d;
}

u64 dual_count_formula(unsigned k, unsigned m, unsigned omega_b) {
    if (m > k || k > 5)
        throw range_error("dual_count_formula needs 0 <= m <= k <= 5");
    u64 const hi = u64{1} << (k - m);
    u64 const base = ((u64{1} << m) - 1) * hi * hi + (hi - 1) * (hi - 1);
    return pow_checked(base, omega_b);
}

u64 dual_count_bruteforce(unsigned k, unsigned m, unsigned omega_b) {
    if (m > k || k > 5)
        throw range_error("dual_count_bruteforce needs 0 <= m <= k <= 5");
    if (omega_b > 8)
        throw range_error("dual_count_bruteforce needs omega(b) <= 8");
    unsigned const parts = (1u << k) - 1;
    unsigned const low = (1u << m) - 1;
    u64 per_prime = 0;
    for (unsigned j = 1; j <= parts; ++j)
        for (unsigned jd = 1; jd <= parts; ++jd)
            per_prime += (j & low) == (jd & low);
    u64 total = 1;
    for (unsigned t = 0; t < omega_b; ++t)
        total = mul_checked(total, per_prime);
    return total;
}

bool b_v_identity_exhaustive(unsigned k, unsigned m, std::span<const u64> primes_of_b) {
    if (k < 2 || k > 4 || m > k)
        throw range_error("b_v identity check needs 2 <= k <= 4, 0 <= m <= k");
    if (primes_of_b.size() > 6)
        throw range_error("b_v identity check needs omega(b) <= 6");
    unsigned const parts = (1u << k) - 1;
    std::size_t const w = primes_of_b.size();

    std::map<std::vector<u64>, std::vector<u64>> seen; // (B_0..B_{m-1}) -> (B_v)
    std::vector<unsigned> j(w, 1);
    std::vector<u64> b(parts);
    for (;;) {
        std::fill(b.begin(), b.end(), 1);
        for (std::size_t t = 0; t < w; ++t)
            b[j[t] - 1] *= primes_of_b[t];
        auto key = low_products(m, b);
        auto classes = b_v_partition(k, m, b);
        auto [it, inserted] = seen.emplace(std::move(key), classes);
        if (!inserted && it->second != classes)
            return false;

        std::size_t t = 0;
        for (; t < w; ++t) {
            if (++j[t] <= parts)
                break;
            j[t] = 1;
        }
        if (t == w)
            break;
    }
    return true;
}

bool b_v_identity_check(unsigned k, unsigned m, unsigned trials, std::uint64_t seed) {
    static constexpr u64 pool[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    std::mt19937_64 rng(seed);
    for (unsigned trial = 0; trial < trials; ++trial) {
        std::vector<u64> primes(std::begin(pool), std::end(pool));
        std::shuffle(primes.begin(), primes.end(), rng);
        std::size_t const omega = 1 + rng() % 6;
        primes.resize(omega);
        if (!b_v_identity_exhaustive(k, m, primes))
            return false;
    }
    return true;
}

} // namespace vlambda
