#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zetamax/arith.hpp"
#include "zetamax/errors.hpp"
#include "zetamax/parallel.hpp"
#include "zetamax/zeta.hpp"

namespace zetamax {

// ---------------------------------------------------------------------------
// Prime partition: X = exp((log T)^{1-1/K}), ranges J_0..J_{K-2},
// sigma0 = 1/2 + (log T)^{3/(2K)} / log T
// ---------------------------------------------------------------------------

struct PrimeLayer {
    int j = 0;
    std::vector<uint64_t> primes; // primes in J_j
    std::vector<double> log_p;
    std::vector<double> weight;   // p^{-sigma0}, strictly decreasing in p
};

// A prime power n = p^k inside some J_j, with coefficient Lambda(n)/log n = 1/k.
struct PrimePowerTerm {
    double log_n;
    double coef;   // (1/k) * n^{-sigma0}
    int layer;     // which J_j contains n
    int k;         // exponent
};

struct Partition {
    double T = 0.0;
    int K = 0;
    double X = 0.0;
    double sigma0 = 0.0;
    bool sigma0_overridden = false;
    double log_T = 0.0;
    // K-1 half-open ranges (lo, hi]; J_0 is closed at 2.
    std::vector<std::pair<double, double>> ranges;
    std::vector<PrimeLayer> layers;
    // prime powers p^k, k >= 2, with p^k <= X (for the fancy polynomials / Q)
    std::vector<PrimePowerTerm> higher_powers;

    double log_log_T() const { return std::log(log_T); }
    int layer_count() const { return K - 1; }
};

inline Partition make_partition(double T, int K, std::optional<double> sigma0_override,
                                const PrimeTable& table) {
    if (!(T >= std::exp(std::exp(1.0))))
        throw domain_error("make_partition: T must be >= e^e so that log log T > 0");
    if (K < 4)
        throw domain_error("make_partition: K must be >= 4 (need K-3 >= 1 middle layers)");

    Partition part;
    part.T = T;
    part.K = K;
    part.log_T = std::log(T);
    part.X = std::exp(std::pow(part.log_T, 1.0 - 1.0 / K));
    if (static_cast<double>(table.limit) < part.X)
        throw coverage_error("make_partition: prime table limit " + std::to_string(table.limit) +
                             " below required X = " + std::to_string(part.X));
    if (sigma0_override) {
        part.sigma0 = *sigma0_override;
        part.sigma0_overridden = true;
    } else {
        part.sigma0 = 0.5 + std::pow(part.log_T, 1.5 / K) / part.log_T;
    }

    // boundaries e_j = exp((log T)^{j/K}); J_0 = [2, e_1], J_j = (e_j, e_{j+1}]
    std::vector<double> edges(K);
    for (int j = 1; j <= K - 1; ++j)
        edges[j] = std::exp(std::pow(part.log_T, static_cast<double>(j) / K));
    edges[0] = 2.0;
    part.ranges.reserve(K - 1);
    for (int j = 0; j <= K - 2; ++j)
        part.ranges.emplace_back(edges[j], edges[j + 1]);

    part.layers.resize(K - 1);
    for (int j = 0; j <= K - 2; ++j) {
        PrimeLayer& layer = part.layers[j];
        layer.j = j;
        const double lo = part.ranges[j].first, hi = part.ranges[j].second;
        size_t begin = (j == 0) ? table.lower_bound(2.0) : table.upper_bound(lo);
        size_t end = table.upper_bound(hi);
        for (size_t i = begin; i < end; ++i) {
            layer.primes.push_back(table.primes[i]);
            layer.log_p.push_back(table.log_p[i]);
            layer.weight.push_back(std::exp(-part.sigma0 * table.log_p[i]));
        }
    }

    // prime powers p^k <= X with k >= 2 (Lambda-support beyond the primes)
    for (size_t i = 0; i < table.count() &&
                       static_cast<double>(table.primes[i]) <= std::sqrt(part.X); ++i) {
        const double p = static_cast<double>(table.primes[i]);
        double n = p * p;
        int k = 2;
        while (n <= part.X) {
            int layer = 0;
            while (layer < K - 2 && n > part.ranges[layer].second) ++layer;
            const double ln = std::log(n);
            part.higher_powers.push_back({ln, std::exp(-part.sigma0 * ln) / k, layer, k});
            n *= p;
            ++k;
        }
    }
    return part;
}

// ---------------------------------------------------------------------------
// Covariance structure (exact prime sums plus the PNT asymptotics)
// ---------------------------------------------------------------------------

struct LayerCovariance {
    double s2;             // (1/2) sum_{p in J_j} p^{-2 sigma0}
    double rho;            // (1/2) sum p^{-2 sigma0} cos(tau log p)
    double asymptotic_s2;  // log log T / (2K)
    double asymptotic_rho; // decorrelation main term: s2 asymptote or 0
};

inline LayerCovariance layer_covariance(const Partition& part, int j, double tau) {
    if (j < 0 || j > part.K - 2) throw domain_error("layer_covariance: layer index out of range");
    const PrimeLayer& layer = part.layers[j];
    double s2 = 0.0, rho = 0.0;
    for (size_t i = 0; i < layer.weight.size(); ++i) {
        const double w2 = layer.weight[i] * layer.weight[i];
        s2 += w2;
        rho += w2 * std::cos(tau * layer.log_p[i]);
    }
    s2 *= 0.5;
    rho *= 0.5;
    const double llT = part.log_log_T();
    const double asym_s2 = llT / (2.0 * part.K);
    // the asymptotics keep full correlation for |tau| <= (log T)^{-(j+1)/K} and
    // no main term once |tau| >= (log T)^{-j/K}; in between there is none either.
    double asym_rho = 0.0;
    if (std::fabs(tau) <= std::pow(part.log_T, -static_cast<double>(j + 1) / part.K))
        asym_rho = asym_s2;
    return {s2, rho, asym_s2, asym_rho};
}

// ---------------------------------------------------------------------------
// The polynomials P~_j, fancy P_j, Q, and the P_j real part
// ---------------------------------------------------------------------------

// P~_j(u) = sum_{p in J_j} p^{-sigma0 - iu}
inline std::complex<double> eval_prime_poly(const Partition& part, int j, double u) {
    if (j < 0 || j > part.K - 2) throw domain_error("eval_prime_poly: layer index out of range");
    const PrimeLayer& layer = part.layers[j];
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < layer.log_p.size(); ++i) {
        const double phase = u * layer.log_p[i];
        re += layer.weight[i] * std::cos(phase);
        im -= layer.weight[i] * std::sin(phase);
    }
    return {re, im};
}

// P_j(u) = Re P~_j(u)
inline double eval_P(const Partition& part, int j, double u) {
    const PrimeLayer& layer = part.layers[j];
    double re = 0.0;
    for (size_t i = 0; i < layer.log_p.size(); ++i)
        re += layer.weight[i] * std::cos(u * layer.log_p[i]);
    return re;
}

// fancy P_j(u) = sum over prime powers n in J_j of Lambda(n)/(n^{sigma0+iu} log n)
inline std::complex<double> eval_fancy_poly(const Partition& part, int j, double u) {
    std::complex<double> val = eval_prime_poly(part, j, u);
    for (const auto& pp : part.higher_powers) {
        if (pp.layer != j) continue;
        const double phase = u * pp.log_n;
        val += std::complex<double>(pp.coef * std::cos(phase), -pp.coef * std::sin(phase));
    }
    return val;
}

struct QValue {
    std::complex<double> value;           // Q(t) = sum_j (fancyP_j - P~_j)(t)
    std::complex<double> squares_approx;  // (1/2) sum_{p <= sqrt X} p^{-2 sigma0 - 2it}
    double cube_tail_bound = 0.0;         // sum_{p^k <= X, k >= 3} p^{-k sigma0}
};

// Q(t): the prime-power excess of the fancy polynomials; squares dominate.
// Note (1/2) p^{-2 sigma0 - 2it} is exactly the k=2 term of Q, so the
// squares-only approximation is the k=2 partial sum and the difference is the
// cube-and-higher tail.
inline QValue eval_Q(const Partition& part, double t) {
    QValue out;
    for (const auto& pp : part.higher_powers) {
        const double phase = t * pp.log_n;
        const std::complex<double> term(pp.coef * std::cos(phase), -pp.coef * std::sin(phase));
        out.value += term;
        if (pp.k == 2)
            out.squares_approx += term;
        else
            out.cube_tail_bound += pp.coef * pp.k; // = n^{-sigma0}
    }
    return out;
}

// ---------------------------------------------------------------------------
// High-throughput shift-grid evaluator (the tau grid over [-1/4, 1/4])
// ---------------------------------------------------------------------------

struct PolyGrid {
    int j = 0;
    double t0 = 0.0;
    double delta = 0.0;
    uint64_t count = 0;
    uint64_t resync_period = 0;
    std::vector<std::complex<double>> values; // P~_j(t0 + k delta), k = 0..count-1
};

// Per-prime phase rotation p^{-i(t0+k delta)} = p^{-i t0} (p^{-i delta})^k via a
// complex multiply recurrence over cache-blocked prime chunks; phases are
// recomputed from scratch every resync_period steps to bound drift. Chunk
// boundaries are fixed so the reduction order (and hence the bits) never
// depends on the worker count.
inline PolyGrid eval_grid(const Partition& part, int j, double t0, double delta, uint64_t count,
                          uint64_t resync_period = 1024, unsigned threads = 1) {
    if (j < 0 || j > part.K - 2) throw domain_error("eval_grid: layer index out of range");
    if (count < 1) throw domain_error("eval_grid: count must be >= 1");
    if (!(delta > 0.0)) throw domain_error("eval_grid: delta must be positive");
    if (resync_period < 16) throw domain_error("eval_grid: resync_period must be >= 16");

    const PrimeLayer& layer = part.layers[j];
    const size_t np = layer.log_p.size();
    constexpr size_t kChunk = 2048;
    const size_t nchunks = (np + kChunk - 1) / kChunk;

    std::vector<std::vector<std::complex<double>>> partial(
        std::max<size_t>(nchunks, 1), std::vector<std::complex<double>>(count));

    parallel_for(nchunks, threads, [&](size_t c) {
        auto& acc = partial[c];
        const size_t begin = c * kChunk, end = std::min(np, begin + kChunk);
        for (size_t i = begin; i < end; ++i) {
            const double lp = layer.log_p[i];
            const double w = layer.weight[i];
            const std::complex<double> rot = std::polar(1.0, -delta * lp);
            std::complex<double> ph = std::polar(w, -t0 * lp);
            for (uint64_t k = 0; k < count; ++k) {
                if (k > 0 && k % resync_period == 0) {
                    const double arg = (t0 + static_cast<double>(k) * delta) * lp;
                    const std::complex<double> exact = std::polar(w, -arg);
                    // the recomputed phase itself carries ~eps*|arg| argument
                    // rounding, so the drift tolerance must scale with it
                    const double tol =
                        1e-9 + 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(arg));
                    if (std::abs(ph - exact) > tol * w)
                        throw resync_error("eval_grid: phase drift " +
                                           std::to_string(std::abs(ph - exact) / w) +
                                           " exceeded tolerance; use a smaller resync_period");
                    ph = exact;
                }
                acc[k] += ph;
                ph *= rot;
            }
        }
    });

    PolyGrid grid;
    grid.j = j;
    grid.t0 = t0;
    grid.delta = delta;
    grid.count = count;
    grid.resync_period = resync_period;
    grid.values.assign(count, {});
    for (size_t c = 0; c < nchunks; ++c)
        for (uint64_t k = 0; k < count; ++k) grid.values[k] += partial[c][k];
    return grid;
}

inline void write_polygrid_csv(const PolyGrid& grid, std::ostream& os) {
    os << "k,u,re,im\n";
    char buf[128];
    for (uint64_t k = 0; k < grid.count; ++k) {
        const double u = grid.t0 + static_cast<double>(k) * grid.delta;
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(k), u, grid.values[k].real(),
                      grid.values[k].imag());
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// Mollifier M(sigma0 + it) = sum mu(n) a(n) n^{-sigma0 - it}
// ---------------------------------------------------------------------------

inline uint64_t default_mollifier_cap(const Partition& part, uint32_t nu) {
    // X^min(nu,3) clamped to 1e7: keeps the enumeration within the term budget
    // (n <= cap implies at most cap terms). The truncation is the desk-scale
    // compromise; its L2 weight is reported by Mollifier::tail_rms.
    const double raw = std::pow(part.X, static_cast<double>(std::min<uint32_t>(nu, 3)));
    return static_cast<uint64_t>(std::min(raw, 1e7));
}

inline uint32_t default_nu(const Partition& part) {
    // Omega(n) <= 100 K log log T; asymptotic slack, exposed as a tunable.
    return static_cast<uint32_t>(std::ceil(100.0 * part.K * part.log_log_T()));
}

struct MollifierValue {
    std::complex<double> value;
    uint64_t term_count = 0;
    double tail_rms = 0.0; // sqrt of the L2 mass skipped by the cap
};

// Materialized mollifier for repeated evaluation at many t.
class Mollifier {
public:
    Mollifier(const PrimeTable& table, const Partition& part, uint32_t nu, uint64_t cap,
              uint64_t term_budget = kDefaultMollifierBudget)
        : sigma0_(part.sigma0) {
        double l2_below = 0.0;
        for_each_mollifier_term(
            table, part.X, nu, cap,
            [&](const MollifierTerm& term) {
                const double ln = std::log(static_cast<double>(term.n));
                log_n_.push_back(ln);
                coef_.push_back(term.sign * std::exp(-sigma0_ * ln));
                l2_below += std::exp(-2.0 * sigma0_ * ln);
            },
            term_budget);
        // total L2 mass over all squarefree X-smooth n: prod_{p<X} (1 + p^{-2 sigma0});
        // the cap tail is the difference. (The Omega cut only removes further mass.)
        double log_full = 0.0;
        const size_t end = table.upper_bound(std::nextafter(part.X, 0.0));
        for (size_t i = 0; i < end; ++i)
            log_full += std::log1p(std::exp(-2.0 * sigma0_ * table.log_p[i]));
        tail_rms_ = std::sqrt(std::max(0.0, std::exp(log_full) - l2_below));
    }

    MollifierValue eval(double t) const {
        double re = 0.0, im = 0.0;
        const size_t n = log_n_.size();
        for (size_t i = 0; i < n; ++i) {
            const double phase = t * log_n_[i];
            re += coef_[i] * std::cos(phase);
            im -= coef_[i] * std::sin(phase);
        }
        return {{re, im}, n, tail_rms_};
    }

    uint64_t term_count() const { return log_n_.size(); }
    double tail_rms() const { return tail_rms_; }

private:
    double sigma0_;
    double tail_rms_ = 0.0;
    std::vector<double> log_n_;
    std::vector<double> coef_;
};

inline MollifierValue eval_mollifier(const PrimeTable& table, const Partition& part, double t,
                                     uint32_t nu, uint64_t cap,
                                     uint64_t term_budget = kDefaultMollifierBudget) {
    return Mollifier(table, part, nu, cap, term_budget).eval(t);
}

// ---------------------------------------------------------------------------
// Truncated exponential  fancyM(t) = sum_{k<=nu} (-1)^k/k! (sum_j fancyP_j(t))^k
// ---------------------------------------------------------------------------

inline std::complex<double> eval_fancy_poly_sum(const Partition& part, double t) {
    std::complex<double> z{};
    for (int j = 0; j <= part.K - 2; ++j) z += eval_prime_poly(part, j, t);
    for (const auto& pp : part.higher_powers) {
        const double phase = t * pp.log_n;
        z += std::complex<double>(pp.coef * std::cos(phase), -pp.coef * std::sin(phase));
    }
    return z;
}

inline std::complex<double> eval_truncated_exp(const Partition& part, double t, uint32_t nu) {
    const std::complex<double> z = -eval_fancy_poly_sum(part, t);
    // Horner on the degree-nu Taylor polynomial of e^z
    std::complex<double> acc = 1.0;
    for (uint32_t k = nu; k >= 1; --k) acc = 1.0 + z / static_cast<double>(k) * acc;
    return acc;
}

// ---------------------------------------------------------------------------
// Mollified second-moment main term (the S1 product)
// ---------------------------------------------------------------------------

struct MollifiedMomentPrediction {
    double S1_main;            // zeta(2 sigma0) prod_{p<X}(1 - p^{-2 sigma0}) = prod_{p>X}(...)^{-1}
    double tail_log;           // log S1_main = sum_{p>X} -log(1 - p^{-2 sigma0}), via the identity
    double tail_log_direct;    // direct prime sum up to the table limit
    double tail_remainder_est; // estimated remainder beyond the table limit
};

inline MollifiedMomentPrediction mollified_moment_prediction(const PrimeTable& table,
                                                             const Partition& part) {
    if (!(part.sigma0 > 0.5))
        throw domain_error("mollified_moment_prediction: requires sigma0 > 1/2");
    const double two_sigma = 2.0 * part.sigma0;
    // identity route: zeta(2 sigma0) * prod_{p<X} (1 - p^{-2 sigma0})
    const double zeta2s = euler_maclaurin_zeta(std::min(two_sigma, 2.0), 0.0, 0, 1e-13).re;
    double log_prod = 0.0;
    const size_t end = table.upper_bound(std::nextafter(part.X, 0.0));
    for (size_t i = 0; i < end; ++i)
        log_prod += std::log1p(-std::exp(-two_sigma * table.log_p[i]));
    const double S1 = zeta2s * std::exp(log_prod);

    // direct route: sum over sieved primes above X, plus an integral remainder
    double direct = 0.0;
    for (size_t i = end; i < table.count(); ++i)
        direct += -std::log1p(-std::exp(-two_sigma * table.log_p[i]));
    const double L = static_cast<double>(table.limit);
    const double remainder =
        std::pow(L, 1.0 - two_sigma) / ((two_sigma - 1.0) * std::log(L));

    return {S1, std::log(S1), direct, remainder};
}

} // namespace zetamax
