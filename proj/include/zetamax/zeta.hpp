#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "zetamax/errors.hpp"
#include "zetamax/rs_tables.hpp"

namespace zetamax {

enum class ZetaMethod { EulerMaclaurin, RiemannSiegel, MainSum };

struct ZetaValue {
    double re = 0.0;
    double im = 0.0;
    ZetaMethod method = ZetaMethod::EulerMaclaurin;
    double error_estimate = 0.0; // absolute, heuristic

    std::complex<double> value() const { return {re, im}; }
    double abs() const { return std::hypot(re, im); }
};

namespace detail {

// B_{2k} for k = 1..20
inline constexpr double kBernoulli2k[20] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0,
    7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0, 854513.0 / 138.0,
    -236364091.0 / 2730.0, 8553103.0 / 6.0, -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0, -7709321041217.0 / 510.0, 2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0, 2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0};

inline double bernoulli_over_fact(int k) { // B_{2k} / (2k)!
    static const auto table = [] {
        std::array<double, 20> t{};
        double fact = 1.0;
        for (int k2 = 1; k2 <= 40; ++k2) {
            fact *= k2;
            if (k2 % 2 == 0) t[k2 / 2 - 1] = kBernoulli2k[k2 / 2 - 1] / fact;
        }
        return t;
    }();
    return table[k - 1];
}

inline std::complex<double> npow(double n, double sigma, double t) {
    // n^{-sigma - i t} = n^{-sigma} * e^{-i t log n}
    const double ln = std::log(n);
    return std::polar(std::exp(-sigma * ln), -t * ln);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Euler-Maclaurin evaluation of zeta and zeta' near the critical line.
// Reference engine: slower than Riemann-Siegel but valid off the half-line
// and carries a rigorous truncation bound.
// ---------------------------------------------------------------------------

inline ZetaValue euler_maclaurin_zeta(double sigma, double t, int derivative_order,
                                      double target_abs_error) {
    using cd = std::complex<double>;
    if (!(sigma >= 0.4 && sigma <= 2.0))
        throw domain_error("euler_maclaurin_zeta: sigma must lie in [0.4, 2]");
    if (!(std::fabs(t) <= 1e8))
        throw domain_error("euler_maclaurin_zeta: |t| must be <= 1e8");
    if (!(target_abs_error >= 1e-14))
        throw domain_error("euler_maclaurin_zeta: target_abs_error must be >= 1e-14");
    if (derivative_order != 0 && derivative_order != 1)
        throw domain_error("euler_maclaurin_zeta: derivative_order must be 0 or 1");

    const bool conj = t < 0.0;
    const double ta = std::fabs(t);
    const cd s(sigma, ta);

    // N must exceed |s|/(2pi) for the tail expansion to converge; the factor
    // here gives ratio ~(|s|/2piN)^2 < 1/4 between consecutive correction terms.
    double smod = std::abs(s);
    uint64_t N = static_cast<uint64_t>(std::max(32.0, smod / 3.0 + 16.0));

    cd sum{}, dsum{};
    double truncation = std::numeric_limits<double>::infinity();
    cd tail{}, dtail{};
    for (int attempt = 0; attempt < 3 && truncation > target_abs_error; ++attempt) {
        if (attempt > 0) N *= 2;
        sum = cd{};
        dsum = cd{};
        double comp_re = 0.0, comp_im = 0.0; // Kahan compensation
        for (uint64_t n = 1; n < N; ++n) {
            const double ln = std::log(static_cast<double>(n));
            const cd term = std::polar(std::exp(-sigma * ln), -ta * ln);
            // compensated accumulation of the main sum
            double y = term.real() - comp_re;
            double tr = sum.real() + y;
            comp_re = (tr - sum.real()) - y;
            double yi = term.imag() - comp_im;
            double ti = sum.imag() + yi;
            comp_im = (ti - sum.imag()) - yi;
            sum = cd(tr, ti);
            if (derivative_order == 1) dsum += -ln * term;
        }
        const double Nf = static_cast<double>(N);
        const double lnN = std::log(Nf);
        const cd NmS = std::polar(std::exp(-sigma * lnN), -ta * lnN); // N^{-s}
        const cd Npow1mS = Nf * NmS;                                  // N^{1-s}

        tail = Npow1mS / (s - 1.0) + 0.5 * NmS;
        dtail = -lnN * Npow1mS / (s - 1.0) - Npow1mS / ((s - 1.0) * (s - 1.0)) -
                0.5 * lnN * NmS;

        // correction terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
        cd poch = s;        // rising product s(s+1)...(s+2k-2)
        cd dpoch = 1.0;     // d/ds of the rising product
        cd Nfac = NmS / Nf; // N^{-s-2k+1} at k=1
        double prev_mag = std::numeric_limits<double>::infinity();
        truncation = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 19; ++k) {
            const double bf = detail::bernoulli_over_fact(k);
            const cd term = bf * poch * Nfac;
            const double mag = std::abs(term);
            if (k > 3 && mag >= prev_mag) break; // divergence onset; keep previous bound
            tail += term;
            if (derivative_order == 1) dtail += bf * (dpoch - lnN * poch) * Nfac;
            prev_mag = mag;
            const cd poch_next = poch * (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
            const cd dpoch_next = dpoch * (s + (2.0 * k - 1.0)) * (s + (2.0 * k)) +
                                  poch * (2.0 * s + (4.0 * k - 1.0));
            const cd Nfac_next = Nfac / (Nf * Nf);
            // remainder after stopping here: first omitted term times |s+2k+1|/(sigma+2k+1)
            const double next_mag = std::fabs(detail::bernoulli_over_fact(k + 1)) *
                                    std::abs(poch_next) * std::abs(Nfac_next);
            truncation = next_mag * std::abs(s + (2.0 * k + 1.0)) / (sigma + 2.0 * k + 1.0);
            poch = poch_next;
            dpoch = dpoch_next;
            Nfac = Nfac_next;
            if (truncation < target_abs_error * 0.25) break;
        }
    }
    if (truncation > target_abs_error)
        throw precision_error("euler_maclaurin_zeta: requested error " +
                              std::to_string(target_abs_error) +
                              " unattainable within the term budget (reached " +
                              std::to_string(truncation) + ")");

    cd value = (derivative_order == 0) ? sum + tail : dsum + dtail;
    if (conj) value = std::conj(value);

    // error model: truncation bound plus phase-rounding noise ~ eps * t * (log N)^1.5
    const double eps = std::numeric_limits<double>::epsilon();
    const double lN = std::log(static_cast<double>(N) + 2.0);
    double rounding = 4.0 * eps * (1.0 + ta * lN * std::sqrt(lN));
    if (derivative_order == 1) rounding *= lN;

    ZetaValue out;
    out.re = value.real();
    out.im = value.imag();
    out.method = ZetaMethod::EulerMaclaurin;
    out.error_estimate = truncation + rounding;
    return out;
}

inline ZetaValue euler_maclaurin_zeta(double sigma, double t, int derivative_order = 0) {
    return euler_maclaurin_zeta(sigma, t, derivative_order, 1e-12);
}

// ---------------------------------------------------------------------------
// Riemann-Siegel Z(t) with correction terms C_0..C_5 from rs_tables.hpp
// ---------------------------------------------------------------------------

// theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi, by the standard asymptotic
// series; for t >= 50 the omitted term is below 1e-15.
inline double riemann_siegel_theta(double t) {
    const double pi = std::numbers::pi;
    const double t2 = t * t;
    return 0.5 * t * (std::log(t / (2.0 * pi)) - 1.0) - pi / 8.0 + 1.0 / (48.0 * t) +
           7.0 / (5760.0 * t * t2) + 31.0 / (80640.0 * t * t2 * t2) +
           127.0 / (430080.0 * t * t2 * t2 * t2);
}

namespace detail {

inline double clenshaw(const double* c, int ncoef, double z) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = ncoef - 1; k >= 1; --k) {
        double b0 = 2.0 * z * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return z * b1 - b2 + c[0];
}

inline double rs_correction(int r, double p) {
    const double z = 2.0 * p - 1.0;
    using namespace rs_tables;
    switch (r) {
        case 0: return clenshaw(kChebC0, static_cast<int>(std::size(kChebC0)), z);
        case 1: return clenshaw(kChebC1, static_cast<int>(std::size(kChebC1)), z);
        case 2: return clenshaw(kChebC2, static_cast<int>(std::size(kChebC2)), z);
        case 3: return clenshaw(kChebC3, static_cast<int>(std::size(kChebC3)), z);
        case 4: return clenshaw(kChebC4, static_cast<int>(std::size(kChebC4)), z);
        default: return clenshaw(kChebC5, static_cast<int>(std::size(kChebC5)), z);
    }
}

} // namespace detail

struct RiemannSiegelValue {
    double Z = 0.0;
    double theta = 0.0;
    ZetaValue zeta; // Z(t) e^{-i theta(t)}; |zeta| == |Z| identically
};

inline RiemannSiegelValue riemann_siegel(double t, unsigned correction_order = 4) {
    if (!(t >= 50.0))
        throw domain_error("riemann_siegel: t below validity floor 50; "
                           "use euler_maclaurin_zeta for small t");
    if (correction_order > 4)
        throw domain_error("riemann_siegel: correction_order must be <= 4");

    const double pi = std::numbers::pi;
    const double a = std::sqrt(t / (2.0 * pi));
    const uint64_t m = static_cast<uint64_t>(a);
    const double p = a - static_cast<double>(m);
    const double theta = riemann_siegel_theta(t);

    double sum = 0.0;
    for (uint64_t n = 1; n <= m; ++n) {
        const double ln = std::log(static_cast<double>(n));
        sum += std::cos(theta - t * ln) / std::sqrt(static_cast<double>(n));
    }
    sum *= 2.0;

    double corr = 0.0;
    double apow = 1.0; // a^{-r}
    for (unsigned r = 0; r <= correction_order; ++r) {
        corr += detail::rs_correction(static_cast<int>(r), p) * apow;
        apow /= a;
    }
    const double sign = (m % 2 == 0) ? -1.0 : 1.0; // (-1)^{m-1}
    const double Z = sum + sign * corr / std::sqrt(a);

    // truncation scale t^{-(2R+3)/4} plus double-rounding in the phases
    const double eps = std::numeric_limits<double>::epsilon();
    const double truncation = std::pow(t, -(2.0 * correction_order + 3.0) / 4.0);
    const double rounding = 8.0 * eps * (std::fabs(theta) + t);

    RiemannSiegelValue out;
    out.Z = Z;
    out.theta = theta;
    out.zeta.re = Z * std::cos(theta);
    out.zeta.im = -Z * std::sin(theta);
    out.zeta.method = ZetaMethod::RiemannSiegel;
    out.zeta.error_estimate = truncation + rounding;
    return out;
}

// ---------------------------------------------------------------------------
// Plain truncated main sum  sum_{n<=N} n^{-sigma-it}
// ---------------------------------------------------------------------------

inline ZetaValue zeta_main_sum(double sigma, double t, uint64_t N) {
    if (!(sigma >= 0.5)) throw domain_error("zeta_main_sum: sigma must be >= 1/2");
    if (N < 1) throw domain_error("zeta_main_sum: N must be >= 1");
    if (N > (1ull << 31))
        throw budget_error("zeta_main_sum: N exceeds the term budget of 2^31 terms");
    std::complex<double> sum{};
    double comp_re = 0.0, comp_im = 0.0;
    for (uint64_t n = 1; n <= N; ++n) {
        const std::complex<double> term = detail::npow(static_cast<double>(n), sigma, t);
        double y = term.real() - comp_re;
        double tr = sum.real() + y;
        comp_re = (tr - sum.real()) - y;
        double yi = term.imag() - comp_im;
        double ti = sum.imag() + yi;
        comp_im = (ti - sum.imag()) - yi;
        sum = {tr, ti};
    }
    ZetaValue out;
    out.re = sum.real();
    out.im = sum.imag();
    out.method = ZetaMethod::MainSum;
    const double Nf = static_cast<double>(N);
    if (N == static_cast<uint64_t>(std::floor(std::fabs(t))) && std::fabs(t) >= 2.0) {
        out.error_estimate = std::pow(std::fabs(t), -0.5); // the truncated-series remainder scale
    } else {
        const double smod = std::hypot(sigma, t);
        out.error_estimate =
            std::pow(Nf, 1.0 - sigma) / std::max(1.0, std::hypot(sigma - 1.0, t)) +
            std::pow(Nf, -sigma) * (1.0 + smod / (2.0 * std::numbers::pi * Nf));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Poisson smoothing: zeta on a line sigma > 1/2 as a Cauchy-kernel average of
// critical-line values.
// ---------------------------------------------------------------------------

struct PoissonSmoothedValue {
    ZetaValue zeta;
    double kernel_mass;     // integral of the kernel over the truncated window
    double quadrature_error; // Richardson estimate plus truncated-mass bound
};

template <class CriticalLineEval>
inline PoissonSmoothedValue poisson_smoothed_zeta_with(double sigma, double t, double v_cutoff,
                                                       double step, CriticalLineEval&& zeta_half) {
    const double w = sigma - 0.5;
    if (!(w > 0.0)) throw domain_error("poisson_smoothed_zeta: requires sigma > 1/2");
    if (!(v_cutoff >= 10.0 * w))
        throw domain_error("poisson_smoothed_zeta: v_cutoff must be >= 10(sigma - 1/2)");
    if (!(step <= w / 4.0) || !(step > 0.0))
        throw resolution_error("poisson_smoothed_zeta: step must be positive and <= (sigma-1/2)/4 "
                               "to resolve the kernel width");

    const double pi = std::numbers::pi;
    auto kernel = [&](double v) { return (1.0 / pi) * w / (w * w + v * v); };

    // composite Simpson on [-V, V]; n even
    auto integrate = [&](double h, double& mass) {
        uint64_t n = static_cast<uint64_t>(std::ceil(2.0 * v_cutoff / h));
        if (n % 2 == 1) ++n;
        const double hh = 2.0 * v_cutoff / static_cast<double>(n);
        std::complex<double> acc{};
        double macc = 0.0;
        for (uint64_t i = 0; i <= n; ++i) {
            const double v = -v_cutoff + hh * static_cast<double>(i);
            const double wgt = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
            const double kv = kernel(v);
            acc += wgt * kv * zeta_half(t + v);
            macc += wgt * kv;
        }
        mass = macc * hh / 3.0;
        return acc * (hh / 3.0);
    };

    double mass_f = 0.0, mass_c = 0.0;
    const std::complex<double> fine = integrate(step, mass_f);
    const std::complex<double> coarse = integrate(2.0 * step, mass_c);
    const double richardson = std::abs(fine - coarse) / 15.0;
    // kernel mass beyond the cutoff, times the largest modulus seen in-window
    const double tail_mass = 1.0 - (2.0 / pi) * std::atan(v_cutoff / w);

    double max_mod = 0.0;
    for (double v = -v_cutoff; v <= v_cutoff; v += v_cutoff / 8.0)
        max_mod = std::max(max_mod, std::abs(zeta_half(t + v)));

    PoissonSmoothedValue out;
    out.zeta.re = fine.real();
    out.zeta.im = fine.imag();
    out.zeta.method = ZetaMethod::RiemannSiegel; // backend engine
    out.kernel_mass = mass_f;
    out.quadrature_error = richardson + tail_mass * max_mod;
    out.zeta.error_estimate = out.quadrature_error;
    return out;
}

inline PoissonSmoothedValue poisson_smoothed_zeta(double sigma, double t, double v_cutoff,
                                                  double step) {
    return poisson_smoothed_zeta_with(sigma, t, v_cutoff, step, [](double u) {
        if (u >= 50.0) return riemann_siegel(u, 4).zeta.value();
        return euler_maclaurin_zeta(0.5, u, 0, 1e-12).value();
    });
}

// ---------------------------------------------------------------------------
// Interval maximum of log|zeta(1/2 + iu)| over |u - t| <= half_width
// ---------------------------------------------------------------------------

struct IntervalMax {
    double t_center = 0.0;
    double u_star = 0.0;
    double value = 0.0; // max of log|zeta(1/2+iu)|
    double grid_spacing = 0.0;
    bool refined = false;
};

inline double critical_line_modulus(double u) {
    const double ua = std::fabs(u);
    if (ua >= 50.0) return std::fabs(riemann_siegel(ua, 4).Z);
    return euler_maclaurin_zeta(0.5, ua, 0, 1e-12).abs();
}

// Grid scan with golden-section refinement on the modulus. The grid density is
// points_per_log_unit * log t points per unit, i.e. spacing 1/(ppl * log t);
// ppl = 1 is the coarsest mesh that still separates neighboring peaks.
template <class ModulusEval>
inline IntervalMax interval_max_log_abs_zeta_with(double t, double half_width,
                                                  double points_per_log_unit,
                                                  unsigned refine_iters, ModulusEval&& modulus) {
    if (!(t >= 100.0)) throw domain_error("interval_max: t must be >= 100");
    if (!(half_width > 0.0 && half_width <= 2.0))
        throw domain_error("interval_max: half_width must lie in (0, 2]");
    if (!(points_per_log_unit >= 1.0))
        throw domain_error("interval_max: points_per_log_unit must be >= 1");

    const uint64_t count = static_cast<uint64_t>(
        std::ceil(2.0 * half_width * points_per_log_unit * std::log(t)));
    const uint64_t n = std::max<uint64_t>(count, 2);
    const double lo = t - half_width, hi = t + half_width;
    const double spacing = (hi - lo) / static_cast<double>(n - 1);

    double best = -1.0, best_u = lo;
    for (uint64_t i = 0; i < n; ++i) {
        const double u = lo + spacing * static_cast<double>(i);
        const double mod = modulus(u);
        if (mod > best) { best = mod; best_u = u; }
    }
    if (best <= 0.0)
        throw domain_error("interval_max: zero modulus at every grid point (degenerate input)");

    // golden-section refinement of the bracket around the best grid point
    double a = std::max(lo, best_u - spacing);
    double b = std::min(hi, best_u + spacing);
    bool refined = false;
    if (refine_iters > 0) {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = modulus(x1), f2 = modulus(x2);
        for (unsigned it = 0; it < refine_iters; ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = modulus(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = modulus(x1);
            }
        }
        const double mid = 0.5 * (a + b);
        const double fm = modulus(mid);
        if (fm > best) { best = fm; best_u = mid; }
        if (f1 > best) { best = f1; best_u = x1; }
        if (f2 > best) { best = f2; best_u = x2; }
        refined = true;
    }

    IntervalMax out;
    out.t_center = t;
    out.u_star = best_u;
    out.value = std::log(best);
    out.grid_spacing = spacing;
    out.refined = refined;
    return out;
}

inline IntervalMax interval_max_log_abs_zeta(double t, double half_width,
                                             double points_per_log_unit = 2.0,
                                             unsigned refine_iters = 12) {
    return interval_max_log_abs_zeta_with(t, half_width, points_per_log_unit, refine_iters,
                                          [](double u) { return critical_line_modulus(u); });
}

} // namespace zetamax
