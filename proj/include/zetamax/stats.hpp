#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "zetamax/dirichlet.hpp"
#include "zetamax/errors.hpp"
#include "zetamax/parallel.hpp"
#include "zetamax/rng.hpp"

namespace zetamax {

// ---------------------------------------------------------------------------
// Estimator reports
// ---------------------------------------------------------------------------

enum class Verdict { WithinBand, Outside };

// One Monte Carlo (or quadrature) estimate against a prediction. `band` is the
// absolute half-width of the acceptance interval; the verdict is always
// recomputable as |empirical - predicted| <= band.
struct EstimatorReport {
    std::string name;
    double empirical = 0.0;
    double stderr_ = 0.0;
    double predicted = 0.0;
    uint64_t n_samples = 0;
    Verdict verdict = Verdict::WithinBand;
    double band = std::numeric_limits<double>::infinity();
    bool insufficient_sample = false; // zero-hit event: no verdict is meaningful

    static EstimatorReport make(std::string name, double empirical, double stderr_est,
                                double predicted, uint64_t n, double band) {
        EstimatorReport r;
        r.name = std::move(name);
        r.empirical = empirical;
        r.stderr_ = stderr_est;
        r.predicted = predicted;
        r.n_samples = n;
        r.band = band;
        r.verdict = (std::fabs(empirical - predicted) <= band) ? Verdict::WithinBand
                                                               : Verdict::Outside;
        return r;
    }
};

// ---------------------------------------------------------------------------
// Gaussian upper tail Psi(x), 12+ significant digits
// ---------------------------------------------------------------------------

// Series for moderate x (via the odd double-factorial expansion of the lower
// tail), Laplace continued fraction beyond x = 3, where the series loses
// digits to cancellation.
inline double gaussian_tail_psi(double x) {
    if (std::isnan(x)) throw domain_error("gaussian_tail_psi: x must be finite");
    if (x < 0.0) return 1.0 - gaussian_tail_psi(-x);
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (x <= 3.0) {
        // Phi(x) - 1/2 = phi(x) * sum_{k>=0} x^{2k+1} / (1*3*5*...*(2k+1))
        double term = x, sum = x;
        for (int k = 1; k < 120; ++k) {
            term *= x * x / (2.0 * k + 1.0);
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return 0.5 - phi * sum;
    }
    // Psi(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...))))
    double cf = 0.0;
    for (int k = 64; k >= 1; --k) cf = static_cast<double>(k) / (x + cf);
    return phi / (x + cf);
}

// ---------------------------------------------------------------------------
// Ramp approximation of the positive-part indicator and its contour identity
// ---------------------------------------------------------------------------

// g_delta(x): 1 for x >= 0, (delta+x)/delta on [-delta, 0], 0 below.
// Sandwiches the indicator: 1_{x>=0} <= g_delta(x) <= 1_{x+delta>=0}.
inline double g_delta(double x, double delta) {
    if (!(delta > 0.0)) throw domain_error("g_delta: delta must be positive");
    if (x >= 0.0) return 1.0;
    if (x <= -delta) return 0.0;
    return (delta + x) / delta;
}

struct ContourIdentityResult {
    double numeric;
    double exact;
    double abs_err;
    double tail_estimate;
};

// Numerically inverts the ramp's contour representation
//   g_delta(x) = (1/2pi i) int_{Re w = c} e^{xw} (e^{dw}-1)/(dw) dw/w
// by Simpson quadrature along w = c + iy, |y| <= cutoff. By conjugate symmetry
// the integral reduces to (1/pi) int_0^cutoff Re F(c+iy) dy. The w^{-2}
// component of the tail is added in closed form; the remaining oscillatory
// tail is O(cutoff^{-2}) and reported.
inline ContourIdentityResult contour_identity_check(double x, double delta, double c,
                                                    double cutoff) {
    if (!(c > 0.0)) throw domain_error("contour_identity_check: c must be positive");
    if (!(cutoff >= 1e3)) throw domain_error("contour_identity_check: cutoff must be >= 1e3");
    if (!(delta > 0.0)) throw domain_error("contour_identity_check: delta must be positive");

    using cd = std::complex<double>;
    auto F = [&](double y) {
        const cd w(c, y);
        return (std::exp(x * w) * (std::exp(delta * w) - 1.0) / (delta * w) / w).real();
    };

    auto simpson = [&](double h) {
        uint64_t n = static_cast<uint64_t>(std::ceil(cutoff / h));
        if (n % 2 == 1) ++n;
        const double hh = cutoff / static_cast<double>(n);
        double acc = F(0.0) + F(cutoff);
        for (uint64_t i = 1; i < n; ++i)
            acc += ((i % 2 == 1) ? 4.0 : 2.0) * F(hh * static_cast<double>(i));
        return acc * hh / 3.0;
    };

    const double h = std::min(0.02, 0.2 / (std::fabs(x) + delta + 1.0));
    const double fine = simpson(h);
    const double coarse = simpson(2.0 * h);
    const double richardson = std::fabs(fine - coarse) / 15.0;
    if (!std::isfinite(fine) || richardson > 0.3)
        throw resolution_error("contour_identity_check: quadrature did not converge");

    // closed-form tail of the -e^{xw}/(delta w^2) component when x = 0 (the
    // only piece without oscillatory decay): -(1/pi delta) * Re(i/(c+iY)).
    double tail_correction = 0.0;
    if (x == 0.0) {
        const std::complex<double> iw(0.0, 1.0);
        tail_correction = -(1.0 / (std::numbers::pi * delta)) *
                          (iw / std::complex<double>(c, cutoff)).real() * (-1.0);
    }
    const double numeric = fine / std::numbers::pi + tail_correction;
    const double exact = g_delta(x, delta);

    const double freq = std::max({std::fabs(x), delta, 1e-3});
    const double tail_est =
        (std::exp(x * c) * (std::exp(delta * c) + 1.0) / (std::numbers::pi * delta)) /
        (freq * cutoff * cutoff) * 2.0;

    return {numeric, exact, std::fabs(numeric - exact), richardson + tail_est};
}

// ---------------------------------------------------------------------------
// Diagonal main term of the 2k-th prime-sum moment: the k-th derivative at 0
// of prod_p I_0(sqrt(a_p b_p) z), by truncated power-series convolution.
// ---------------------------------------------------------------------------

inline double bessel_main_term(std::span<const double> coeff_products, unsigned k) {
    if (k > 40) throw domain_error("bessel_main_term: k must be <= 40");
    if (k % 2 == 1) return 0.0; // the product is even in z
    const unsigned q = k / 2;
    // series in y = z^2: I_0 factor has y^m coefficient c^m / (4^m (m!)^2)
    std::vector<double> poly(q + 1, 0.0);
    poly[0] = 1.0;
    std::vector<double> factor(q + 1), next(q + 1);
    for (double c : coeff_products) {
        double term = 1.0;
        for (unsigned m = 0; m <= q; ++m) {
            factor[m] = term;
            term *= c / (4.0 * (m + 1.0) * (m + 1.0));
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (unsigned i = 0; i <= q; ++i) {
            if (poly[i] == 0.0) continue;
            for (unsigned m = 0; i + m <= q; ++m) next[i + m] += poly[i] * factor[m];
        }
        poly.swap(next);
    }
    double kfact = 1.0;
    for (unsigned i = 2; i <= k; ++i) kfact *= i;
    const double result = kfact * poly[q];
    if (!std::isfinite(result))
        throw budget_error("bessel_main_term: series overflow beyond the double budget");
    return result;
}

// ---------------------------------------------------------------------------
// Gaussian moment main term of the two-point proposition
// ---------------------------------------------------------------------------

inline std::complex<double> gaussian_moment_prediction(std::span<const double> s2,
                                                       std::span<const double> rho,
                                                       std::span<const std::complex<double>> xi,
                                                       std::span<const std::complex<double>> xi_prime,
                                                       unsigned n) {
    if (s2.size() != rho.size() || s2.size() != xi.size() || s2.size() != xi_prime.size())
        throw domain_error("gaussian_moment_prediction: arrays must be aligned");
    if (n % 2 == 1) return 0.0;
    std::complex<double> inner{};
    for (size_t j = 0; j < s2.size(); ++j)
        inner += s2[j] * (xi[j] * xi[j] + xi_prime[j] * xi_prime[j]) +
                 2.0 * rho[j] * xi[j] * xi_prime[j];
    // n! / (2^{n/2} (n/2)!) * inner^{n/2}
    double coef = 1.0;
    for (unsigned i = n / 2 + 1; i <= n; ++i) coef *= i; // n! / (n/2)!
    coef /= std::pow(2.0, n / 2.0);
    return coef * std::pow(inner, static_cast<double>(n / 2));
}

// ---------------------------------------------------------------------------
// Monte Carlo estimators with jackknife errors
// ---------------------------------------------------------------------------

inline double jackknife_stderr_of_mean(std::span<const double> xs, unsigned blocks = 20) {
    const size_t n = xs.size();
    if (n < 2) return 0.0;
    const unsigned B = static_cast<unsigned>(std::min<size_t>(blocks, n));
    double total = 0.0;
    for (double x : xs) total += x;
    std::vector<double> loo(B);
    double loo_mean = 0.0;
    for (unsigned b = 0; b < B; ++b) {
        const size_t begin = n * b / B, end = n * (b + 1) / B;
        double block = 0.0;
        for (size_t i = begin; i < end; ++i) block += xs[i];
        loo[b] = (total - block) / static_cast<double>(n - (end - begin));
        loo_mean += loo[b];
    }
    loo_mean /= B;
    double ss = 0.0;
    for (unsigned b = 0; b < B; ++b) ss += (loo[b] - loo_mean) * (loo[b] - loo_mean);
    return std::sqrt(ss * static_cast<double>(B - 1) / static_cast<double>(B));
}

// Sample mean of sampler(key)^n over n_samples keyed draws; the sampler must be
// a pure function of its key.
inline EstimatorReport empirical_moment(const std::function<double(uint64_t)>& sampler, unsigned n,
                                        uint64_t n_samples, uint64_t seed, std::string name = "moment",
                                        double predicted = std::numeric_limits<double>::quiet_NaN(),
                                        double band = std::numeric_limits<double>::infinity()) {
    if (n_samples < 2) throw domain_error("empirical_moment: n_samples must be >= 2");
    std::vector<double> xs(n_samples);
    for (uint64_t i = 0; i < n_samples; ++i) {
        const double v = sampler(derive_key(seed, i));
        double p = 1.0;
        for (unsigned e = 0; e < n; ++e) p *= v;
        xs[i] = p;
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n_samples);
    const double se = jackknife_stderr_of_mean(xs);
    if (std::isnan(predicted)) {
        EstimatorReport r;
        r.name = std::move(name);
        r.empirical = mean;
        r.stderr_ = se;
        r.predicted = mean;
        r.n_samples = n_samples;
        r.band = band;
        return r;
    }
    return EstimatorReport::make(std::move(name), mean, se, predicted, n_samples, band);
}

// ---------------------------------------------------------------------------
// Large-deviation events A(tau) = { P_j(t + tau) > x_j for all 1 <= j <= K-3 }
// ---------------------------------------------------------------------------

struct EventSpec {
    std::vector<double> thresholds; // x_j, j = 1..K-3
    std::vector<double> taus;       // shifts

    void validate(const Partition& part) const {
        const size_t want = static_cast<size_t>(part.K - 3);
        if (thresholds.size() != want)
            throw domain_error("EventSpec: need exactly K-3 thresholds");
        const double llT = part.log_log_T();
        for (double x : thresholds)
            if (!(x > 0.0 && x <= llT))
                throw domain_error("EventSpec: thresholds must satisfy 0 < x_j <= log log T");
    }
};

struct EventTauReport {
    double tau = 0.0;
    EstimatorReport p_A;         // P(A) vs prod Psi(x_j/s_j)
    EstimatorReport p_Atau;      // P(A(tau)) vs the same product
    EstimatorReport p_joint;     // P(A ∩ A(tau)) vs P(A)_pred^2
    double exponent_bound = 0.0; // tilted bound: sum_{j<=m} x^2/2s^2 + sum_{j>m} x^2/s^2
    double empirical_exponent = 0.0; // -log empirical joint (when nonzero)
    int m_split = 0;
};

struct EventProbabilityResult {
    std::vector<EventTauReport> taus;
    EstimatorReport barrier; // frequency of any |P_j| > (log T)^{1/(4K)}
    double psi_product = 0.0;
};

// Monte Carlo over t uniform in [T, 2T]; all predictions use the exact prime
// sums s_j^2, never the asymptotics.
inline EventProbabilityResult event_probability(const Partition& part, const EventSpec& spec,
                                                uint64_t n_samples, uint64_t seed,
                                                bool validate_thresholds = true,
                                                unsigned threads = 0) {
    if (validate_thresholds) spec.validate(part);
    if (part.K < 4) throw domain_error("event_probability: K must be >= 4");
    const int jlo = 1, jhi = part.K - 3;
    const size_t nj = static_cast<size_t>(jhi - jlo + 1);
    if (spec.thresholds.size() != nj) throw domain_error("event_probability: threshold count");

    double psi_product = 1.0;
    for (size_t idx = 0; idx < nj; ++idx) {
        const double s2 = layer_covariance(part, jlo + static_cast<int>(idx), 0.0).s2;
        psi_product *= gaussian_tail_psi(spec.thresholds[idx] / std::sqrt(s2));
    }

    const double barrier_level = std::pow(part.log_T, 1.0 / (4.0 * part.K));
    const size_t ntau = spec.taus.size();

    // per-sample bit rows: A at tau=0, A(tau), joint, barrier violation
    std::vector<uint8_t> hitA(n_samples);
    std::vector<std::vector<uint8_t>> hitTau(ntau, std::vector<uint8_t>(n_samples));
    std::vector<std::vector<uint8_t>> hitJoint(ntau, std::vector<uint8_t>(n_samples));
    std::vector<uint8_t> hitBarrier(n_samples);

    parallel_for(n_samples, threads, [&](size_t i) {
        const double t = part.T * (1.0 + key_to_unit(derive_key(seed, i)));
        bool A = true, barrier_violation = false;
        for (size_t idx = 0; idx < nj; ++idx) {
            const double pj = eval_P(part, jlo + static_cast<int>(idx), t);
            if (!(pj > spec.thresholds[idx])) A = false;
            if (std::fabs(pj) > barrier_level) barrier_violation = true;
        }
        hitA[i] = A;
        hitBarrier[i] = barrier_violation;
        for (size_t k = 0; k < ntau; ++k) {
            bool At = true;
            for (size_t idx = 0; idx < nj; ++idx) {
                const double pj = eval_P(part, jlo + static_cast<int>(idx), t + spec.taus[k]);
                if (!(pj > spec.thresholds[idx])) { At = false; break; }
            }
            hitTau[k][i] = At;
            hitJoint[k][i] = At && A;
        }
    });

    auto freq_report = [&](std::string name, const std::vector<uint8_t>& hits, double predicted) {
        std::vector<double> xs(hits.begin(), hits.end());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        const double se = jackknife_stderr_of_mean(xs);
        auto r = EstimatorReport::make(std::move(name), mean, se, predicted, xs.size(),
                                       3.0 * std::max(se, 1e-300));
        if (mean == 0.0) {
            r.insufficient_sample = true;
            r.band = std::numeric_limits<double>::infinity();
            r.verdict = Verdict::WithinBand;
        }
        return r;
    };

    EventProbabilityResult out;
    out.psi_product = psi_product;
    out.barrier = freq_report("barrier_violation", hitBarrier, 0.0);
    out.barrier.band = std::numeric_limits<double>::infinity(); // diagnostic count, no sharp prediction
    out.barrier.verdict = Verdict::WithinBand;

    for (size_t k = 0; k < ntau; ++k) {
        EventTauReport tr;
        tr.tau = spec.taus[k];
        tr.p_A = freq_report("P(A)", hitA, psi_product);
        tr.p_Atau = freq_report("P(A(tau))", hitTau[k], psi_product);
        tr.p_joint = freq_report("P(A&A(tau))", hitJoint[k], psi_product * psi_product);
        // largest m in [0, K-3] with |tau| <= (log T)^{-m/K}
        int m = 0;
        for (int cand = part.K - 3; cand >= 0; --cand) {
            if (std::fabs(tr.tau) <= std::pow(part.log_T, -static_cast<double>(cand) / part.K)) {
                m = cand;
                break;
            }
        }
        tr.m_split = m;
        double expo = 0.0;
        for (size_t idx = 0; idx < nj; ++idx) {
            const int j = jlo + static_cast<int>(idx);
            const double s2 = layer_covariance(part, j, 0.0).s2;
            const double x2 = spec.thresholds[idx] * spec.thresholds[idx];
            expo += (j <= m) ? x2 / (2.0 * s2) : x2 / s2;
        }
        tr.exponent_bound = expo;
        tr.empirical_exponent =
            (tr.p_joint.empirical > 0.0) ? -std::log(tr.p_joint.empirical) : 0.0;
        out.taus.push_back(std::move(tr));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fourier-Laplace transform estimate restricted to the barrier set
// ---------------------------------------------------------------------------

inline EstimatorReport exp_moment(const Partition& part, std::span<const double> xi,
                                  std::span<const double> xi_prime, double tau,
                                  uint64_t n_samples, uint64_t seed, unsigned threads = 0) {
    const int jlo = 1, jhi = part.K - 3;
    const size_t nj = static_cast<size_t>(jhi - jlo + 1);
    if (xi.size() != nj || xi_prime.size() != nj)
        throw domain_error("exp_moment: xi arrays must have K-3 entries");
    const double xi_bound = std::pow(part.log_T, 1.0 / (16.0 * part.K));
    for (size_t idx = 0; idx < nj; ++idx)
        if (std::fabs(xi[idx]) > xi_bound || std::fabs(xi_prime[idx]) > xi_bound)
            throw domain_error(
                "exp_moment: |xi_j| must be <= (log T)^{1/16K} = " + std::to_string(xi_bound) +
                " (precondition of the Fourier-Laplace transform bounds)");

    const double barrier_level = std::pow(part.log_T, 1.0 / (4.0 * part.K));
    double predicted_exp = 0.0;
    for (size_t idx = 0; idx < nj; ++idx) {
        const int j = jlo + static_cast<int>(idx);
        const auto cov = layer_covariance(part, j, tau);
        predicted_exp += cov.s2 * (xi[idx] * xi[idx] + xi_prime[idx] * xi_prime[idx]) +
                         2.0 * cov.rho * xi[idx] * xi_prime[idx];
    }
    const double predicted = std::exp(0.5 * predicted_exp);

    std::vector<double> xs(n_samples);
    parallel_for(n_samples, threads, [&](size_t i) {
        const double t = part.T * (1.0 + key_to_unit(derive_key(seed, i)));
        double expo = 0.0;
        bool inB = true;
        for (size_t idx = 0; idx < nj; ++idx) {
            const int j = jlo + static_cast<int>(idx);
            const double p0 = eval_P(part, j, t);
            const double p1 = eval_P(part, j, t + tau);
            if (std::fabs(p0) > barrier_level || std::fabs(p1) > barrier_level) inB = false;
            expo += xi[idx] * p0 + xi_prime[idx] * p1;
        }
        xs[i] = inB ? std::exp(expo) : 0.0;
    });
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n_samples);
    const double se = jackknife_stderr_of_mean(xs);
    return EstimatorReport::make("exp_moment", mean, se, predicted, n_samples, 3.0 * se);
}

// ---------------------------------------------------------------------------
// Paley-Zygmund lower bound from per-trial counts S = sum_l 1_{A(tau_l)}
// ---------------------------------------------------------------------------

struct PaleyZygmundResult {
    double ratio = 0.0;       // (E S)^2 / E S^2, lower bound on P(union)
    double union_freq = 0.0;  // empirical P(S > 0)
    double union_stderr = 0.0;
    bool all_zero = false;
    bool bound_holds = true;  // ratio <= union_freq + 3 stderr (sampling slack)
};

inline PaleyZygmundResult paley_zygmund_ratio(std::span<const double> indicator_sums) {
    if (indicator_sums.empty()) throw domain_error("paley_zygmund_ratio: need at least one trial");
    double m1 = 0.0, m2 = 0.0;
    std::vector<double> hits(indicator_sums.size());
    for (size_t i = 0; i < indicator_sums.size(); ++i) {
        m1 += indicator_sums[i];
        m2 += indicator_sums[i] * indicator_sums[i];
        hits[i] = indicator_sums[i] > 0.0 ? 1.0 : 0.0;
    }
    m1 /= static_cast<double>(indicator_sums.size());
    m2 /= static_cast<double>(indicator_sums.size());
    PaleyZygmundResult out;
    if (m2 == 0.0) {
        out.all_zero = true;
        out.bound_holds = true; // 0 <= 0 vacuously
        return out;
    }
    out.ratio = m1 * m1 / m2;
    for (double h : hits) out.union_freq += h;
    out.union_freq /= static_cast<double>(hits.size());
    out.union_stderr = jackknife_stderr_of_mean(hits);
    out.bound_holds = out.ratio <= out.union_freq + 3.0 * out.union_stderr;
    return out;
}

} // namespace zetamax
