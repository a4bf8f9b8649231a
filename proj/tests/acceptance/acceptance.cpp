// Acceptance suite: runs every criterion at its stated tolerance and prints
// one [PASS]/[FAIL] line each. Exit code is the number of failed criteria.
// All Monte Carlo uses the fixed base seed 1.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "zetamax/arith.hpp"
#include "zetamax/dirichlet.hpp"
#include "zetamax/gauss_model.hpp"
#include "zetamax/harness.hpp"
#include "zetamax/stats.hpp"
#include "zetamax/zeta.hpp"

using namespace zetamax;
namespace fs = std::filesystem;

namespace {

constexpr uint64_t kSeed = 1;
int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double minutes() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
               60.0;
    }
};

void report(int criterion, bool pass, const std::string& detail, double minutes,
            double limit_minutes) {
    const bool in_time = minutes <= limit_minutes;
    const bool ok = pass && in_time;
    if (!ok) ++g_failures;
    std::printf("[%s] C%d: %s  (%.2f min, limit %.0f)\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str(), minutes, limit_minutes);
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// C1: the two zeta engines agree; |zeta(1/2)| reference value
// ---------------------------------------------------------------------------
void criterion1() {
    Timer timer;
    const double zeta_half_ref = -1.4603545;
    auto zh = euler_maclaurin_zeta(0.5, 0.0, 0, 1e-12);
    const bool ref_ok = std::fabs(std::fabs(zh.re) - std::fabs(zeta_half_ref)) <= 1e-6;

    const uint64_t n = 1000;
    std::vector<uint8_t> ok(n, 0);
    std::vector<double> gap(n, 0.0);
    parallel_for(n, 0, [&](size_t i) {
        const double t = 100.0 + (1e6 - 100.0) * uniform01(kSeed, i);
        auto em = euler_maclaurin_zeta(0.5, t, 0, 1e-11);
        auto rs = riemann_siegel(t, 4);
        const double diff = std::abs(em.value() - rs.zeta.value());
        ok[i] = diff <= em.error_estimate + rs.zeta.error_estimate;
        gap[i] = diff;
    });
    uint64_t good = 0;
    double worst = 0.0;
    for (uint64_t i = 0; i < n; ++i) {
        good += ok[i];
        worst = std::max(worst, gap[i]);
    }
    report(1, ref_ok && good == n,
           fmt("zeta(1/2) = %.9f (ref %.7f); engines agree %llu/%llu, worst gap %.2e", zh.re,
               zeta_half_ref, (unsigned long long)good, (unsigned long long)n, worst),
           timer.minutes(), 2);
}

// ---------------------------------------------------------------------------
// C2: FHK leading order at T = 1e7 over 200 random unit intervals
// ---------------------------------------------------------------------------
void criterion2() {
    Timer timer;
    ExperimentConfig cfg;
    cfg.T = 1e7;
    cfg.K = 4;
    cfg.seed = kSeed;
    cfg.samples = 200;
    cfg.output_dir = (fs::temp_directory_path() / "zetamax_acc_fhk").string();
    fs::remove_all(cfg.output_dir);
    auto s = run_fhk_sample(cfg);
    const double llT = std::log(std::log(cfg.T));
    const double lo = llT - std::log(llT);
    const double hi = llT + 1.0;
    const bool pass = s.p50 >= lo && s.p50 <= hi && s.failures == 0;
    report(2, pass,
           fmt("median max log|zeta| = %.4f in [%.4f, %.4f] (p10 %.3f, p90 %.3f)", s.p50, lo, hi,
               s.p10, s.p90),
           timer.minutes(), 30);
}

// ---------------------------------------------------------------------------
// C3: Chebyshev upper bound at T = 1e5, V = 5
// ---------------------------------------------------------------------------
void criterion3() {
    Timer timer;
    ExperimentConfig cfg;
    cfg.T = 1e5;
    cfg.K = 4;
    cfg.seed = kSeed;
    cfg.samples = 500;
    cfg.output_dir = (fs::temp_directory_path() / "zetamax_acc_ub").string();
    fs::remove_all(cfg.output_dir);
    auto s = run_upper_bound_check(cfg, 5.0);
    const bool pass = s.empirical_freq <= 3.0 * s.bound;
    report(3, pass,
           fmt("P(max|zeta| > 5 log T) = %.4f <= 3 * C/V^2 = %.4f (C = %.3f)", s.empirical_freq,
               3.0 * s.bound, s.chebyshev_constant),
           timer.minutes(), 10);
}

// ---------------------------------------------------------------------------
// C4: moment structure (Bessel main terms; Monte Carlo variance of P_1)
// ---------------------------------------------------------------------------
void criterion4() {
    Timer timer;
    // quadrature moments of the prime polynomial over primes <= 50 at T = 1e4
    auto table = sieve_primes(1000);
    auto part_small = make_partition(1e4, 4, std::nullopt, table);
    const double sigma0 = part_small.sigma0;
    std::vector<double> amps, logs, prods;
    for (size_t i = 0; i < table.count() && table.primes[i] <= 50; ++i) {
        const double a = std::exp(-sigma0 * table.log_p[i]);
        amps.push_back(a);
        logs.push_back(table.log_p[i]);
        prods.push_back(a * a);
    }
    const double T = 1e4;
    const uint64_t n = 1u << 21; // Simpson step ~ 0.0048
    const double h = T / static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (uint64_t i = 0; i <= n; ++i) {
        const double t = T + h * static_cast<double>(i);
        double P = 0.0;
        for (size_t k = 0; k < amps.size(); ++k) P += amps[k] * std::cos(t * logs[k]);
        const double w = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
        m2 += w * P * P;
        m4 += w * P * P * P * P;
    }
    m2 *= h / 3.0 / T;
    m4 *= h / 3.0 / T;
    const double b2 = bessel_main_term(prods, 2);
    const double b4 = bessel_main_term(prods, 4);
    const bool bessel_ok = std::fabs(m2 - b2) <= 0.02 * b2 && std::fabs(m4 - b4) <= 0.02 * b4;

    // Monte Carlo E[P_1^2] at T = 1e7 against the exact s_1^2
    auto big = sieve_primes(4000);
    auto part = make_partition(1e7, 4, std::nullopt, big);
    const double s2 = layer_covariance(part, 1, 0.0).s2;
    auto rep = empirical_moment(
        [&](uint64_t key) { return eval_P(part, 1, part.T * (1.0 + key_to_unit(key))); }, 2,
        100000, kSeed, "E[P_1^2]", s2, 0.0);
    const bool mc_ok = std::fabs(rep.empirical - s2) <= 3.0 * rep.stderr_;

    report(4, bessel_ok && mc_ok,
           fmt("quadrature k=2: %.5f vs %.5f, k=4: %.5f vs %.5f (2%% band); "
               "E[P_1^2] = %.5f vs s_1^2 = %.5f (3se = %.5f)",
               m2, b2, m4, b4, rep.empirical, s2, 3.0 * rep.stderr_),
           timer.minutes(), 10);
}

// ---------------------------------------------------------------------------
// C5: covariance against the exact prime sums rho_1(tau)
// ---------------------------------------------------------------------------
void criterion5() {
    Timer timer;
    auto big = sieve_primes(4000);
    auto part = make_partition(1e7, 4, std::nullopt, big);
    auto c0 = layer_covariance(part, 1, 0.0);
    bool pass = (c0.rho == c0.s2); // exact identity at tau = 0
    std::string detail = fmt("rho(0) == s_1^2 = %.6f exactly", c0.s2);

    const uint64_t n = 100000;
    for (double tau : {0.0, 0.01, 0.1, 1.0}) {
        const double rho = layer_covariance(part, 1, tau).rho;
        std::vector<double> prod(n);
        parallel_for(n, 0, [&](size_t i) {
            const double t = part.T * (1.0 + uniform01(kSeed + 5, i));
            prod[i] = eval_P(part, 1, t) * eval_P(part, 1, t + tau);
        });
        double mean = 0.0;
        for (double p : prod) mean += p;
        mean /= static_cast<double>(n);
        const double se = jackknife_stderr_of_mean(prod);
        const bool ok = std::fabs(mean - rho) <= 3.0 * se;
        pass = pass && ok;
        detail += fmt("; tau=%g: %.5f vs %.5f (3se %.5f)%s", tau, mean, rho, 3.0 * se,
                      ok ? "" : " OUT");
    }
    report(5, pass, detail, timer.minutes(), 10);
}

// ---------------------------------------------------------------------------
// C6: mollifier chain
// ---------------------------------------------------------------------------
void criterion6() {
    Timer timer;
    auto measure = [&](double T, double& med_zm, double& med_me) {
        auto table = sieve_primes(10000);
        auto part = make_partition(T, 4, std::nullopt, table);
        const uint32_t nu = default_nu(part);
        Mollifier moll(table, part, nu, default_mollifier_cap(part, nu));
        const uint64_t n = 100;
        std::vector<double> zm(n), me(n);
        parallel_for(n, 0, [&](size_t i) {
            const double t = T * (1.0 + uniform01(kSeed + 6, i));
            const auto mv = moll.eval(t);
            const auto zz = euler_maclaurin_zeta(part.sigma0, t, 0, 1e-9);
            zm[i] = std::abs(zz.value() * mv.value - 1.0);
            me[i] = std::abs(mv.value - std::exp(-eval_fancy_poly_sum(part, t)));
        });
        med_zm = quantile(zm, 0.5);
        med_me = quantile(me, 0.5);
    };
    double zm6, me6, zm7, me7;
    measure(1e6, zm6, me6);
    measure(1e7, zm7, me7);
    const bool level_ok = zm6 <= 0.2;
    const bool mono_ok = zm7 <= zm6;
    const bool exp_ok = me6 <= 1e-2;
    report(6, level_ok && mono_ok && exp_ok,
           fmt("median |zeta M - 1|: %.4f @1e6 (<= 0.2), %.4f @1e7 (nonincreasing: %s); "
               "median |M - exp(-sum P)| = %.4f @1e6 (<= 1e-2: %s; %.4f @1e7)",
               zm6, zm7, mono_ok ? "yes" : "NO", me6, exp_ok ? "yes" : "NO", me7),
           timer.minutes(), 20);
}

// ---------------------------------------------------------------------------
// C7: large deviations
// ---------------------------------------------------------------------------
void criterion7() {
    Timer timer;
    auto big = sieve_primes(4000);
    auto part = make_partition(1e7, 4, std::nullopt, big);
    const double s2 = layer_covariance(part, 1, 0.0).s2;
    const double s1 = std::sqrt(s2);

    EventSpec spec;
    spec.thresholds = {s1};
    spec.taus = {1.0};
    auto res = event_probability(part, spec, 100000, kSeed + 7);
    const auto& A = res.taus[0].p_A;
    const double psi1 = gaussian_tail_psi(1.0);
    const bool one_point_ok = std::fabs(A.empirical - psi1) <= 3.0 * A.stderr_;

    const double joint = res.taus[0].p_joint.empirical;
    const double ratio = (A.empirical > 0.0) ? joint / (A.empirical * A.empirical) : 0.0;
    const bool decouple_ok = ratio >= 0.67 && ratio <= 1.5;

    const double barrier_count = res.barrier.empirical * 100000.0;
    const bool barrier_ok = barrier_count <= 50.0;

    const double xi[] = {1.0};
    const double zero[] = {0.0};
    auto em = exp_moment(part, xi, zero, 0.0, 100000, kSeed + 8);
    const bool exp_ok = std::fabs(em.empirical - std::exp(0.5 * s2)) <= 3.0 * em.stderr_;

    report(7, one_point_ok && decouple_ok && barrier_ok && exp_ok,
           fmt("P(P_1>s_1) = %.5f vs Psi(1) = %.5f (3se %.5f)%s; ratio(tau=1) = %.4f in "
               "[0.67,1.5]%s%s; barrier count %.0f <= 50%s; exp-moment %.5f vs %.5f (3se %.5f)%s",
               A.empirical, psi1, 3.0 * A.stderr_, one_point_ok ? "" : " OUT", ratio,
               decouple_ok ? "" : " OUT",
               res.taus[0].p_joint.insufficient_sample ? " [insufficient-sample: 0 joint hits]" : "",
               barrier_count, barrier_ok ? "" : " OUT", em.empirical, std::exp(0.5 * s2),
               3.0 * em.stderr_, exp_ok ? "" : " OUT"),
           timer.minutes(), 15);
}

// ---------------------------------------------------------------------------
// C8: contour identity on nine (x, delta) pairs spanning all three branches
// ---------------------------------------------------------------------------
void criterion8() {
    Timer timer;
    bool pass = true;
    std::string detail = "max |numeric - g_delta| = ";
    double worst = 0.0;
    for (double delta : {0.1, 0.4, 1.0}) {
        const double xs[] = {0.8, -0.5 * delta, -2.0 * delta}; // the three branches
        for (double x : xs) {
            auto r = contour_identity_check(x, delta, 1.0, 1e4);
            worst = std::max(worst, r.abs_err);
            if (r.abs_err > 1e-3) pass = false;
        }
    }
    detail += fmt("%.2e over 9 pairs (<= 1e-3)", worst);
    report(8, pass, detail, timer.minutes(), 1);
}

// ---------------------------------------------------------------------------
// C9: branching random walk surrogate
// ---------------------------------------------------------------------------
void criterion9() {
    Timer timer;
    // exact dichotomy on 1e4 random leaf pairs
    BrwConfig cfg;
    cfg.generations = 8;
    cfg.branching = 4;
    cfg.level_variance = 0.75;
    cfg.seed = kSeed + 9;
    const uint64_t leaves = cfg.leaf_count();
    bool dicho_ok = true;
    for (int rep = 0; rep < 10000 && dicho_ok; ++rep) {
        const uint64_t a = static_cast<uint64_t>(leaves * uniform01(kSeed, 2 * rep));
        const uint64_t b = static_cast<uint64_t>(leaves * uniform01(kSeed, 2 * rep + 1));
        auto va = leaf_field(cfg, a);
        auto vb = leaf_field(cfg, b);
        for (uint32_t j = 0; j < cfg.generations; ++j) {
            const bool equal = covariance_dichotomy(cfg, a, b, j) == CovarianceKind::Equal;
            if (equal != (va.increments[j] == vb.increments[j])) dicho_ok = false;
        }
    }

    // first-order displacement: b = 4, g = 10, v = ln(4^10)/(2(g+1))
    BrwConfig deep;
    deep.generations = 10;
    deep.branching = 4;
    const double L = std::log(std::pow(4.0, 10.0));
    deep.level_variance = L / 22.0;
    deep.seed = kSeed + 10;
    auto res = simulate_max(deep, 200, 0);
    const bool max_ok = res.mean_max >= 0.75 * L && res.mean_max <= 1.00 * L;

    report(9, dicho_ok && max_ok,
           fmt("dichotomy exact on 1e4 pairs: %s; mean max = %.3f in [%.3f, %.3f]",
               dicho_ok ? "yes" : "NO", res.mean_max, 0.75 * L, 1.00 * L),
           timer.minutes(), 5);
}

// ---------------------------------------------------------------------------
// C10: byte-identical CSV output across thread counts for every subcommand
// ---------------------------------------------------------------------------
void criterion10(const std::string& cli) {
    Timer timer;
    const fs::path base = fs::temp_directory_path() / "zetamax_acc_det";
    fs::remove_all(base);
    fs::create_directories(base);

    struct Cmd { std::string name, args; };
    const std::vector<Cmd> cmds = {
        {"partition", "partition --t 1e5 --k 4"},
        {"zeta-eval", "zeta-eval --sigma 0.5 --t 1234.5 --method rs"},
        {"max-scan", "max-scan --t 12345.0 --half-width 0.5"},
        {"fhk-sample", "fhk-sample --samples 20"},
        {"proxy-compare", "proxy-compare --samples 8"},
        {"upper-bound", "upper-bound --V 5 --samples 12"},
        {"moments", "moments --max-n 3 --samples 4000"},
        {"covariance", "covariance --tau 0 --tau 0.5 --samples 4000"},
        {"mollifier-check", "mollifier-check --samples 6"},
        {"large-dev", "large-dev --tau 0.5 --samples 4000"},
        {"brw", "brw --generations 6 --branching 3 --level-variance 0.5 --trials 50"},
    };
    // fhk/upper-bound run at T=1e5; proxy/mollifier at T=1e4 via config files
    const fs::path cfg5 = base / "cfg5.json";
    {
        std::ofstream o(cfg5);
        o << R"({"t": 1e5, "k": 4, "seed": 1})";
    }
    const fs::path cfg4 = base / "cfg4.json";
    {
        std::ofstream o(cfg4);
        o << R"({"t": 1e4, "k": 4, "seed": 1})";
    }

    bool pass = true;
    std::string first_fail;
    for (const auto& c : cmds) {
        const fs::path d1 = base / (c.name + "_a");
        const fs::path d2 = base / (c.name + "_b");
        const bool small_T = (c.name == "proxy-compare" || c.name == "mollifier-check");
        const std::string cfg_arg = " --config " + (small_T ? cfg4 : cfg5).string();
        for (int run = 0; run < 2; ++run) {
            const fs::path out = (run == 0) ? d1 : d2;
            const std::string threads = (run == 0) ? "1" : "2";
            const std::string cmdline = cli + " " + c.args + cfg_arg + " --seed 1 --threads " +
                                        threads + " --out " + out.string() + " > " +
                                        (base / "log.txt").string() + " 2>&1";
            const int rc = std::system(cmdline.c_str());
            if (rc != 0) {
                pass = false;
                if (first_fail.empty()) first_fail = c.name + " exited " + std::to_string(rc);
            }
        }
        if (!fs::exists(d1)) continue;
        for (const auto& entry : fs::directory_iterator(d1)) {
            if (entry.path().extension() != ".csv") continue;
            std::ifstream a(entry.path(), std::ios::binary);
            std::ifstream b(d2 / entry.path().filename(), std::ios::binary);
            std::stringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (sa.str() != sb.str() || sa.str().empty()) {
                pass = false;
                if (first_fail.empty())
                    first_fail = c.name + "/" + entry.path().filename().string() + " differs";
            }
        }
    }
    // exit-code contract: config errors map to 2
    {
        const fs::path bad = base / "bad.json";
        std::ofstream o(bad);
        o << R"({"t": 1e5, "k": 4, "seed": 1, "lambda": 1.5})";
        o.close();
        const std::string cmdline = cli + " fhk-sample --config " + bad.string() + " > " +
                                    (base / "log.txt").string() + " 2>&1";
        const int rc = std::system(cmdline.c_str());
        if (!(WIFEXITED(rc) && WEXITSTATUS(rc) == 2)) {
            pass = false;
            if (first_fail.empty()) first_fail = "config error did not exit with code 2";
        }
    }
    report(10, pass,
           pass ? "all subcommand CSVs byte-identical across thread counts; config error exits 2"
                : "determinism breach: " + first_fail,
           timer.minutes(), 5);
}

} // namespace

int main(int argc, char** argv) {
    std::printf("zetamax acceptance suite (seed %llu)\n", (unsigned long long)kSeed);
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (argc > 1) {
        criterion10(argv[1]);
    } else {
        std::printf("[SKIP] C10: pass the CLI binary path as argv[1]\n");
        ++g_failures;
    }
    std::printf("%d criterion/criteria failed\n", g_failures);
    return g_failures;
}
