#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zetamax/errors.hpp"

namespace zetamax {

// ---------------------------------------------------------------------------
// Prime table
// ---------------------------------------------------------------------------

// Sieved primes with per-prime natural logs. Immutable after construction and
// safe to share across workers; p^{-sigma} weights are materialized per
// partition layer (dirichlet.hpp) since sigma0 varies by experiment.
struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;
    std::vector<double> log_p;

    size_t count() const { return primes.size(); }

    // index of first prime >= x
    size_t lower_bound(double x) const {
        uint64_t xi = (x <= 0.0) ? 0 : static_cast<uint64_t>(std::ceil(x));
        return static_cast<size_t>(
            std::lower_bound(primes.begin(), primes.end(), xi) - primes.begin());
    }
    // index one past last prime <= x
    size_t upper_bound(double x) const {
        if (x < 0.0) return 0;
        uint64_t xi = static_cast<uint64_t>(std::floor(x));
        return static_cast<size_t>(
            std::upper_bound(primes.begin(), primes.end(), xi) - primes.begin());
    }
};

inline constexpr uint64_t kSieveCapacity = 1'000'000'000ull;

// Segmented Eratosthenes. 64-bit limits at the interface; the capacity bound
// keeps a single run's memory within the workstation budget.
inline PrimeTable sieve_primes(uint64_t limit) {
    if (limit < 2) throw domain_error("sieve_primes: limit < 2 yields an empty table");
    if (limit > kSieveCapacity)
        throw capacity_error("sieve_primes: limit " + std::to_string(limit) +
                             " exceeds sieve capacity " + std::to_string(kSieveCapacity));

    const uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    std::vector<char> small(root + 1, 1);
    small[0] = 0;
    if (root >= 1) small[1] = 0;
    for (uint64_t i = 2; i * i <= root; ++i)
        if (small[i])
            for (uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    std::vector<uint64_t> base;
    for (uint64_t i = 2; i <= root; ++i)
        if (small[i]) base.push_back(i);

    PrimeTable table;
    table.limit = limit;
    if (limit >= 3) {
        // pi(x) < 1.3 x/log x for x >= 17; just reserve roughly
        table.primes.reserve(static_cast<size_t>(
            1.2 * static_cast<double>(limit) / std::log(static_cast<double>(limit) + 2.0) + 16));
    }

    const uint64_t seg_size = 1u << 20;
    std::vector<char> seg(seg_size);
    for (uint64_t low = 2; low <= limit; low += seg_size) {
        const uint64_t high = std::min(limit, low + seg_size - 1);
        std::fill(seg.begin(), seg.begin() + (high - low + 1), 1);
        for (uint64_t p : base) {
            if (p * p > high) break;
            uint64_t start = std::max(p * p, ((low + p - 1) / p) * p);
            for (uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
        }
        for (uint64_t i = low; i <= high; ++i)
            if (seg[i - low]) table.primes.push_back(i);
    }

    table.log_p.resize(table.primes.size());
    for (size_t i = 0; i < table.primes.size(); ++i)
        table.log_p[i] = std::log(static_cast<double>(table.primes[i]));
    return table;
}

// ---------------------------------------------------------------------------
// Deterministic primality (Miller-Rabin with a 64-bit-complete witness set)
// ---------------------------------------------------------------------------

namespace detail {
inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}
inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}
} // namespace detail

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Multiplicative arithmetic functions (trial division; desk-scale n)
// ---------------------------------------------------------------------------

struct Factorization {
    std::vector<std::pair<uint64_t, uint32_t>> factors; // (prime, exponent)
};

inline Factorization factorize(uint64_t n) {
    if (n == 0) throw domain_error("factorize: n must be >= 1");
    Factorization f;
    for (uint64_t p : {2ull, 3ull, 5ull}) {
        if (n % p == 0) {
            uint32_t e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.factors.emplace_back(p, e);
        }
    }
    // 2,3,5-wheel
    static constexpr uint32_t wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    uint64_t p = 7;
    int w = 0;
    while (p * p <= n) {
        if (n % p == 0) {
            uint32_t e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.factors.emplace_back(p, e);
        }
        p += wheel[w];
        w = (w + 1) & 7;
    }
    if (n > 1) f.factors.emplace_back(n, 1);
    return f;
}

// Moebius function: 0 on non-squarefree n, else (-1)^{omega(n)}.
inline int mobius(uint64_t n) {
    if (n == 0) throw domain_error("mobius: n must be >= 1");
    if (n == 1) return 1;
    auto f = factorize(n);
    for (auto& [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

// Omega(n): number of prime factors counted with multiplicity.
inline uint32_t big_omega(uint64_t n) {
    if (n == 0) throw domain_error("big_omega: n must be >= 1");
    uint32_t total = 0;
    for (auto& [p, e] : factorize(n).factors) total += e;
    return total;
}

// Lambda(n)/log n: equals 1/k when n = p^k, 0 otherwise.
inline double lambda_over_log(uint64_t n) {
    if (n <= 1) throw domain_error("lambda_over_log: n must be >= 2");
    auto f = factorize(n);
    if (f.factors.size() != 1) return 0.0;
    return 1.0 / static_cast<double>(f.factors[0].second);
}

// ---------------------------------------------------------------------------
// Mollifier support: squarefree X-smooth integers with few prime factors
// ---------------------------------------------------------------------------

// One term of the mollifier sum: n squarefree with all prime factors < X,
// omega(n) <= nu, sign = mu(n) = (-1)^omega.
struct MollifierTerm {
    uint64_t n;
    int sign;
    uint32_t omega;
};

inline constexpr uint64_t kDefaultMollifierBudget = 10'000'000ull;

// Depth-first enumeration over the sorted prime list with product cutoff;
// each qualifying n is emitted exactly once, in preorder (root n=1 first).
// Emission order is recursion order, not ascending in n.
template <class Visitor>
inline uint64_t for_each_mollifier_term(const PrimeTable& table, double X, uint32_t nu,
                                        uint64_t cap, Visitor&& visit,
                                        uint64_t term_budget = kDefaultMollifierBudget) {
    if (X < 2.0) throw domain_error("mollifier_terms: X must be >= 2");
    if (cap < 1) throw domain_error("mollifier_terms: cap must be >= 1");
    // "primes smaller than X": the boundary p = X is excluded.
    const size_t end = table.upper_bound(std::nextafter(X, 0.0));
    uint64_t emitted = 0;

    std::function<void(size_t, uint64_t, uint32_t, int)> rec =
        [&](size_t idx, uint64_t prod, uint32_t omega, int sign) {
            if (++emitted > term_budget)
                throw budget_error("mollifier_terms: enumeration exceeds term budget of " +
                                   std::to_string(term_budget) + " terms");
            visit(MollifierTerm{prod, sign, omega});
            if (omega >= nu) return;
            for (size_t i = idx; i < end; ++i) {
                uint64_t p = table.primes[i];
                if (prod > cap / p) break; // prod * p would exceed cap
                rec(i + 1, prod * p, omega + 1, -sign);
            }
        };
    rec(0, 1, 0, +1);
    return emitted;
}

inline std::vector<MollifierTerm> mollifier_terms(const PrimeTable& table, double X, uint32_t nu,
                                                  uint64_t cap,
                                                  uint64_t term_budget = kDefaultMollifierBudget) {
    std::vector<MollifierTerm> out;
    for_each_mollifier_term(table, X, nu, cap, [&](const MollifierTerm& t) { out.push_back(t); },
                            term_budget);
    return out;
}

// ---------------------------------------------------------------------------
// Prime power sums
// ---------------------------------------------------------------------------

struct PrimePowerSum {
    double value;          // sum_{x <= p <= y} p^{-2 sigma}, exact over the sieve
    double pnt_prediction; // log(log y / log x), the main term when sigma = 1/2
};

inline PrimePowerSum prime_power_sum(double x, double y, double sigma, const PrimeTable& table) {
    if (!(x >= 2.0) || !(y >= x)) throw domain_error("prime_power_sum: need 2 <= x <= y");
    if (y > static_cast<double>(table.limit))
        throw coverage_error("prime_power_sum: table covers only up to " +
                             std::to_string(table.limit) + ", requested y = " + std::to_string(y));
    const size_t lo = table.lower_bound(x);
    const size_t hi = table.upper_bound(y);
    double sum = 0.0;
    for (size_t i = lo; i < hi; ++i)
        sum += std::exp(-2.0 * sigma * table.log_p[i]);
    return {sum, std::log(std::log(y) / std::log(x))};
}

// Half-open variant sum_{x < p <= y}; used for range-additivity.
inline double prime_power_sum_open(double x, double y, double sigma, const PrimeTable& table) {
    if (y > static_cast<double>(table.limit))
        throw coverage_error("prime_power_sum: table covers only up to " +
                             std::to_string(table.limit));
    const size_t lo = table.upper_bound(x);
    const size_t hi = table.upper_bound(y);
    double sum = 0.0;
    for (size_t i = lo; i < hi; ++i)
        sum += std::exp(-2.0 * sigma * table.log_p[i]);
    return sum;
}

} // namespace zetamax
