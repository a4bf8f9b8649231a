// Command-line laboratory driver. Subcommands mirror the experiment surface:
//   partition, zeta-eval, max-scan, fhk-sample, proxy-compare, upper-bound,
//   moments, covariance, mollifier-check, large-dev, brw, report
// Exit codes: 0 success, 2 config error, 3 budget/precision error,
//             4 invalid run (>1% sample failures).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "zetamax/arith.hpp"
#include "zetamax/dirichlet.hpp"
#include "zetamax/gauss_model.hpp"
#include "zetamax/harness.hpp"
#include "zetamax/stats.hpp"
#include "zetamax/zeta.hpp"

using namespace zetamax;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> samples;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
    std::string format = "csv";
};

ExperimentConfig resolve_config(const GlobalOpts& g, double default_T = 1e6, int default_K = 4) {
    ExperimentConfig cfg;
    if (!g.config_path.empty()) {
        cfg = load_config(g.config_path);
    } else {
        cfg.T = default_T;
        cfg.K = default_K;
        cfg.seed = 1;
    }
    if (g.seed) cfg.seed = *g.seed;
    if (g.samples) cfg.samples = *g.samples;
    if (g.threads) cfg.threads = *g.threads;
    if (g.out_dir) cfg.output_dir = *g.out_dir;
    cfg.validate();
    return cfg;
}

PrimeTable table_for(const ExperimentConfig& cfg) {
    const double X = std::exp(std::pow(std::log(cfg.T), 1.0 - 1.0 / cfg.K));
    return sieve_primes(static_cast<uint64_t>(std::ceil(X)) + 1);
}

std::ofstream open_result(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return std::ofstream(fs::path(cfg.output_dir) / name);
}

void write_report_csv(std::ostream& os, const std::vector<EstimatorReport>& reports) {
    os << "name,empirical,stderr,predicted,n_samples,band,verdict,insufficient_sample\n";
    for (const auto& r : reports) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%llu,%.17g,%s,%d\n", r.name.c_str(),
                      r.empirical, r.stderr_, r.predicted,
                      static_cast<unsigned long long>(r.n_samples), r.band,
                      r.verdict == Verdict::WithinBand ? "within" : "outside",
                      r.insufficient_sample ? 1 : 0);
        os << buf;
    }
}

void write_reports(const ExperimentConfig& cfg, const std::string& base,
                   const std::vector<EstimatorReport>& reports, const std::string& format,
                   RunManifest& manifest);

nlohmann::json report_to_json(const EstimatorReport& r) {
    return {{"name", r.name},
            {"empirical", r.empirical},
            {"stderr", r.stderr_},
            {"predicted", r.predicted},
            {"n_samples", r.n_samples},
            {"band", r.band},
            {"verdict", r.verdict == Verdict::WithinBand ? "within" : "outside"},
            {"insufficient_sample", r.insufficient_sample}};
}

void write_reports(const ExperimentConfig& cfg, const std::string& base,
                   const std::vector<EstimatorReport>& reports, const std::string& format,
                   RunManifest& manifest) {
    if (format == "json") {
        auto out = open_result(cfg, base + ".json");
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : reports) j.push_back(report_to_json(r));
        out << j.dump(2) << "\n";
        manifest.finish({base + ".json"});
    } else {
        auto out = open_result(cfg, base + ".csv");
        write_report_csv(out, reports);
        manifest.finish({base + ".csv"});
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zetamax: numerical laboratory for extreme values of zeta on short intervals"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file");
    uint64_t seed_opt = 0, samples_opt = 0;
    unsigned threads_opt = 0;
    std::string out_opt, format_opt;
    auto* so = app.add_option("--seed", seed_opt, "base RNG seed");
    auto* no = app.add_option("--samples", samples_opt, "Monte Carlo sample count");
    auto* to = app.add_option("--threads", threads_opt, "worker threads (0 = all)");
    auto* oo = app.add_option("--out", out_opt, "output directory");
    app.add_option("--format", format_opt, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    // ---- partition ----
    auto* cmd_partition = app.add_subcommand("partition", "print the prime partition");
    double part_T = 1e7;
    int part_K = 4;
    cmd_partition->add_option("--t", part_T, "height T");
    cmd_partition->add_option("--k", part_K, "number of ranges plus one (K)");

    // ---- zeta-eval ----
    auto* cmd_zeval = app.add_subcommand("zeta-eval", "evaluate zeta by one engine");
    double ze_sigma = 0.5, ze_t = 100.0, ze_err = 1e-10;
    int ze_deriv = 0;
    std::string ze_method = "em";
    cmd_zeval->add_option("--sigma", ze_sigma, "real part");
    cmd_zeval->add_option("--t", ze_t, "imaginary part");
    cmd_zeval->add_option("--deriv", ze_deriv, "derivative order (0|1, em only)");
    cmd_zeval->add_option("--method", ze_method, "em|rs|mainsum")
        ->check(CLI::IsMember({"em", "rs", "mainsum"}));
    cmd_zeval->add_option("--target-error", ze_err, "absolute error target (em)");

    // ---- max-scan ----
    auto* cmd_scan = app.add_subcommand("max-scan", "interval maximum of log|zeta| on the critical line");
    double ms_t = 1e5, ms_hw = 1.0, ms_ppl = 2.0;
    unsigned ms_refine = 12;
    cmd_scan->add_option("--t", ms_t, "interval center");
    cmd_scan->add_option("--half-width", ms_hw, "interval half width");
    cmd_scan->add_option("--points-per-log-unit", ms_ppl, "grid density multiplier");
    cmd_scan->add_option("--refine", ms_refine, "golden-section refinement rounds");

    // ---- fhk-sample / proxy-compare / upper-bound ----
    auto* cmd_fhk = app.add_subcommand("fhk-sample", "Monte Carlo of the interval maximum");
    auto* cmd_proxy = app.add_subcommand("proxy-compare", "Dirichlet proxy vs zeta maximum");
    auto* cmd_upper = app.add_subcommand("upper-bound", "Chebyshev upper-bound check");
    double ub_V = 5.0;
    cmd_upper->add_option("--V", ub_V, "threshold multiplier V");

    // ---- moments ----
    auto* cmd_moments = app.add_subcommand("moments", "empirical moments of P_j vs predictions");
    int mo_j = 1, mo_maxn = 4;
    cmd_moments->add_option("--j", mo_j, "layer index");
    cmd_moments->add_option("--max-n", mo_maxn, "highest moment");

    // ---- covariance ----
    auto* cmd_cov = app.add_subcommand("covariance", "empirical vs exact shifted covariance");
    std::vector<double> cov_taus{0.0, 0.01, 0.1, 1.0};
    int cov_j = 1;
    cmd_cov->add_option("--j", cov_j, "layer index");
    cmd_cov->add_option("--tau", cov_taus, "shift values");

    // ---- mollifier-check ----
    auto* cmd_moll = app.add_subcommand("mollifier-check", "zeta*M-1 and M-exp(-sum P) deviations");

    // ---- large-dev ----
    auto* cmd_ldev = app.add_subcommand("large-dev", "large-deviation events and Paley-Zygmund ratio");
    std::vector<double> ld_taus{0.01, 0.1, 1.0};
    cmd_ldev->add_option("--tau", ld_taus, "shifts for the two-point events");
    double ld_threshold_mult = std::numeric_limits<double>::quiet_NaN();
    cmd_ldev->add_option("--threshold-sd", ld_threshold_mult,
                         "thresholds x_j as multiples of s_j (default: (lambda/K)loglogT)");

    // ---- brw ----
    auto* cmd_brw = app.add_subcommand("brw", "branching random walk surrogate maxima");
    unsigned brw_g = 0, brw_b = 0;
    double brw_v = -1.0;
    uint64_t brw_trials = 200;
    cmd_brw->add_option("--generations", brw_g, "tree depth (default K-1)");
    cmd_brw->add_option("--branching", brw_b, "edges per vertex (default ceil((log T)^{1/K}))");
    cmd_brw->add_option("--level-variance", brw_v, "edge variance (default loglogT/(2K))");
    cmd_brw->add_option("--trials", brw_trials, "number of trees");

    // ---- report ----
    auto* cmd_report = app.add_subcommand("report", "summarize a run directory; detect orphans");
    std::string rep_dir;
    cmd_report->add_option("dir", rep_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
        if (so->count()) g.seed = seed_opt;
        if (no->count()) g.samples = samples_opt;
        if (to->count()) g.threads = threads_opt;
        if (oo->count()) g.out_dir = out_opt;
        if (!format_opt.empty()) g.format = format_opt;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cmd_partition->parsed()) {
            ExperimentConfig cfg = resolve_config(g, part_T, part_K);
            if (!g.config_path.empty()) { part_T = cfg.T; part_K = cfg.K; }
            cfg.T = part_T; cfg.K = part_K;
            auto table = table_for(cfg);
            auto manifest = RunManifest::begin(cfg);
            auto part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
            std::printf("T = %g  K = %d  X = %.6f  sigma0 = %.9f%s\n", part.T, part.K, part.X,
                        part.sigma0, part.sigma0_overridden ? " (override)" : "");
            std::printf("log T = %.6f  log log T = %.6f\n", part.log_T, part.log_log_T());
            auto csv = open_result(cfg, "partition.csv");
            csv << "j,lo,hi,prime_count,s2,rho_at_1,asymptotic_s2\n";
            for (int j = 0; j < part.layer_count(); ++j) {
                auto cov = layer_covariance(part, j, 1.0);
                std::printf("J_%d = (%.4f, %.4f]  primes = %zu  s_j^2 = %.6f (asymptotic %.6f)\n",
                            j, part.ranges[j].first, part.ranges[j].second,
                            part.layers[j].primes.size(), cov.s2, cov.asymptotic_s2);
                char buf[256];
                std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%zu,%.17g,%.17g,%.17g\n", j,
                              part.ranges[j].first, part.ranges[j].second,
                              part.layers[j].primes.size(), cov.s2, cov.rho, cov.asymptotic_s2);
                csv << buf;
            }
            csv.close();
            manifest.finish({"partition.csv"});
        } else if (cmd_zeval->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            ZetaValue v;
            if (ze_method == "em") {
                v = euler_maclaurin_zeta(ze_sigma, ze_t, ze_deriv, ze_err);
            } else if (ze_method == "rs") {
                auto rs = riemann_siegel(ze_t, 4);
                v = rs.zeta;
                std::printf("Z(t) = %.15g  theta(t) = %.15g\n", rs.Z, rs.theta);
            } else {
                v = zeta_main_sum(ze_sigma, ze_t, static_cast<uint64_t>(std::floor(ze_t)));
            }
            std::printf("zeta = %.15g %+.15gi  |zeta| = %.15g  est_error = %.3g\n", v.re, v.im,
                        v.abs(), v.error_estimate);
            auto manifest = RunManifest::begin(cfg);
            auto csv = open_result(cfg, "zeta_eval.csv");
            char buf[256];
            csv << "sigma,t,re,im,abs,error_estimate,method\n";
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", ze_sigma,
                          ze_t, v.re, v.im, v.abs(), v.error_estimate, ze_method.c_str());
            csv << buf;
            csv.close();
            manifest.finish({"zeta_eval.csv"});
        } else if (cmd_scan->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto im = interval_max_log_abs_zeta(ms_t, ms_hw, ms_ppl, ms_refine);
            std::printf("t = %.6f  u* = %.9f  max log|zeta| = %.9f  spacing = %.3g  refined = %d\n",
                        im.t_center, im.u_star, im.value, im.grid_spacing, im.refined ? 1 : 0);
            auto manifest = RunManifest::begin(cfg);
            auto csv = open_result(cfg, "max_scan.csv");
            char buf[256];
            csv << "t,u_star,value,grid_spacing,refined\n";
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", im.t_center, im.u_star,
                          im.value, im.grid_spacing, im.refined ? 1 : 0);
            csv << buf;
            csv.close();
            manifest.finish({"max_scan.csv"});
        } else if (cmd_fhk->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto summary = run_fhk_sample(cfg);
            std::printf("fhk-sample: %llu samples  p10 = %.4f  p50 = %.4f  p90 = %.4f\n",
                        static_cast<unsigned long long>(cfg.samples), summary.p10, summary.p50,
                        summary.p90);
            std::printf("log log T = %.4f  FHK prediction = %.4f  failures = %llu\n",
                        summary.loglogT, summary.fhk_prediction,
                        static_cast<unsigned long long>(summary.failures));
        } else if (cmd_proxy->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto table = table_for(cfg);
            auto summary = run_proxy_comparison(cfg, table);
            std::printf("proxy-compare: proxy_event_freq = %.4f  joint_plain = %.4f  "
                        "joint_slacked = %.4f\n",
                        summary.proxy_event_freq, summary.joint_freq_plain,
                        summary.joint_freq_slacked);
            std::printf("median |zeta M - 1| = %.5f  median |M - exp(-sum P)| = %.5f  skips = %llu\n",
                        summary.median_zeta_moll_dev, summary.median_moll_exp_dev,
                        static_cast<unsigned long long>(summary.mollifier_skips));
        } else if (cmd_upper->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto summary = run_upper_bound_check(cfg, ub_V);
            std::printf("upper-bound: V = %g  empirical = %.6f  C = %.4f  bound C/V^2 = %.6f\n",
                        summary.V, summary.empirical_freq, summary.chebyshev_constant,
                        summary.bound);
        } else if (cmd_moments->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto table = table_for(cfg);
            auto part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
            const double s2 = layer_covariance(part, mo_j, 0.0).s2;
            std::vector<EstimatorReport> reports;
            for (int n = 1; n <= mo_maxn; ++n) {
                // Gaussian main term: 0 for odd n, (n-1)!! s^n for even n
                double pred = 0.0;
                if (n % 2 == 0) {
                    pred = 1.0;
                    for (int i = n - 1; i >= 1; i -= 2) pred *= i;
                    pred *= std::pow(s2, n / 2.0);
                }
                auto rep = empirical_moment(
                    [&](uint64_t key) {
                        const double t = part.T * (1.0 + key_to_unit(key));
                        return eval_P(part, mo_j, t);
                    },
                    static_cast<unsigned>(n), cfg.samples, cfg.seed + n,
                    "E[P_" + std::to_string(mo_j) + "^" + std::to_string(n) + "]", pred,
                    std::numeric_limits<double>::infinity());
                rep.band = 3.0 * rep.stderr_;
                rep.verdict = std::fabs(rep.empirical - rep.predicted) <= rep.band
                                  ? Verdict::WithinBand
                                  : Verdict::Outside;
                std::printf("%s = %.6f +- %.6f  (gaussian main term %.6f)\n", rep.name.c_str(),
                            rep.empirical, rep.stderr_, rep.predicted);
                reports.push_back(std::move(rep));
            }
            auto manifest = RunManifest::begin(cfg);
            write_reports(cfg, "moments", reports, g.format, manifest);
        } else if (cmd_cov->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto table = table_for(cfg);
            auto part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
            std::vector<EstimatorReport> reports;
            for (double tau : cov_taus) {
                const auto cov = layer_covariance(part, cov_j, tau);
                std::vector<double> prods(cfg.samples);
                for (uint64_t i = 0; i < cfg.samples; ++i) {
                    const double t = part.T * (1.0 + uniform01(cfg.seed, i));
                    prods[i] = eval_P(part, cov_j, t) * eval_P(part, cov_j, t + tau);
                }
                double mean = 0.0;
                for (double p : prods) mean += p;
                mean /= static_cast<double>(cfg.samples);
                const double se = jackknife_stderr_of_mean(prods);
                auto rep = EstimatorReport::make("cov(P_" + std::to_string(cov_j) + ", tau=" +
                                                     std::to_string(tau) + ")",
                                                 mean, se, cov.rho, cfg.samples, 3.0 * se);
                std::printf("%s: empirical %.6f +- %.6f  exact rho %.6f  [%s]\n",
                            rep.name.c_str(), mean, se, cov.rho,
                            rep.verdict == Verdict::WithinBand ? "within" : "OUTSIDE");
                reports.push_back(std::move(rep));
            }
            auto manifest = RunManifest::begin(cfg);
            write_reports(cfg, "covariance", reports, g.format, manifest);
        } else if (cmd_moll->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto table = table_for(cfg);
            auto part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
            const uint32_t nu = cfg.nu_override ? *cfg.nu_override : default_nu(part);
            const uint64_t cap = default_mollifier_cap(part, nu);
            Mollifier moll(table, part, nu, cap);
            std::vector<double> cdev(cfg.samples), ddev(cfg.samples);
            parallel_for(cfg.samples, cfg.threads, [&](size_t i) {
                const double t = part.T * (1.0 + uniform01(cfg.seed, i));
                const auto mv = moll.eval(t);
                const auto zz = euler_maclaurin_zeta(part.sigma0, t, 0, 1e-10);
                cdev[i] = std::abs(zz.value() * mv.value - 1.0);
                ddev[i] = std::abs(mv.value - std::exp(-eval_fancy_poly_sum(part, t)));
            });
            auto pred = mollified_moment_prediction(table, part);
            std::printf("mollifier: %llu terms  tail_rms = %.4g  nu = %u  cap = %llu\n",
                        static_cast<unsigned long long>(moll.term_count()), moll.tail_rms(), nu,
                        static_cast<unsigned long long>(cap));
            std::printf("median |zeta M - 1| = %.5f   median |M - exp(-sum P)| = %.5f\n",
                        quantile(cdev, 0.5), quantile(ddev, 0.5));
            std::printf("S1 main term = %.6f  tail_log = %.6f (direct %.6f + remainder est %.2g)\n",
                        pred.S1_main, pred.tail_log, pred.tail_log_direct,
                        pred.tail_remainder_est);
            auto manifest = RunManifest::begin(cfg);
            auto csv = open_result(cfg, "mollifier.csv");
            csv << "sample_index,zeta_moll_dev,moll_exp_dev\n";
            for (uint64_t i = 0; i < cfg.samples; ++i) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n",
                              static_cast<unsigned long long>(i), cdev[i], ddev[i]);
                csv << buf;
            }
            csv.close();
            manifest.finish({"mollifier.csv"});
        } else if (cmd_ldev->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            auto table = table_for(cfg);
            auto part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
            EventSpec spec;
            const double llT = part.log_log_T();
            for (int j = 1; j <= cfg.K - 3; ++j) {
                const double s = std::sqrt(layer_covariance(part, j, 0.0).s2);
                spec.thresholds.push_back(std::isnan(ld_threshold_mult)
                                              ? cfg.lambda / cfg.K * llT
                                              : ld_threshold_mult * s);
            }
            spec.taus = ld_taus;
            auto result = event_probability(part, spec, cfg.samples, cfg.seed, true, cfg.threads);
            std::vector<EstimatorReport> reports;
            std::printf("prediction prod Psi(x_j/s_j) = %.6g\n", result.psi_product);
            std::printf("barrier violations: %.6g (count %g in %llu samples)\n",
                        result.barrier.empirical,
                        result.barrier.empirical * static_cast<double>(cfg.samples),
                        static_cast<unsigned long long>(cfg.samples));
            reports.push_back(result.barrier);
            for (const auto& tr : result.taus) {
                std::printf("tau = %g: P(A) = %.5f  P(A&A(tau)) = %.6g  pred^2 = %.6g  "
                            "exponent bound %.3f (m=%d)\n",
                            tr.tau, tr.p_A.empirical, tr.p_joint.empirical,
                            tr.p_joint.predicted, tr.exponent_bound, tr.m_split);
                reports.push_back(tr.p_A);
                reports.push_back(tr.p_Atau);
                reports.push_back(tr.p_joint);
            }
            // Paley-Zygmund over the proxy grid
            const uint64_t ntau = cfg.effective_tau_grid_count();
            std::vector<double> S(cfg.samples);
            parallel_for(cfg.samples, cfg.threads, [&](size_t i) {
                const double t = part.T * (1.0 + uniform01(cfg.seed, i));
                double count = 0.0;
                for (uint64_t l = 0; l < ntau; ++l) {
                    const double tau = (ntau == 1)
                                           ? 0.0
                                           : -cfg.proxy_half_width +
                                                 2.0 * cfg.proxy_half_width *
                                                     static_cast<double>(l) /
                                                     static_cast<double>(ntau - 1);
                    bool all = true;
                    for (int j = 1; j <= cfg.K - 3; ++j)
                        if (!(eval_P(part, j, t + tau) > spec.thresholds[j - 1])) {
                            all = false;
                            break;
                        }
                    if (all) count += 1.0;
                }
                S[i] = count;
            });
            auto pz = paley_zygmund_ratio(S);
            std::printf("Paley-Zygmund: ratio = %.6f  union frequency = %.6f (+- %.6f)%s\n",
                        pz.ratio, pz.union_freq, pz.union_stderr,
                        pz.all_zero ? "  [all-zero S]" : "");
            auto manifest = RunManifest::begin(cfg);
            auto csv = open_result(cfg, "large_dev.csv");
            write_report_csv(csv, reports);
            csv.close();
            auto jf = open_result(cfg, "large_dev.json");
            nlohmann::json j;
            j["psi_product"] = result.psi_product;
            j["paley_zygmund_ratio"] = pz.ratio;
            j["union_freq"] = pz.union_freq;
            j["reports"] = nlohmann::json::array();
            for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
            jf << j.dump(2) << "\n";
            jf.close();
            manifest.finish({"large_dev.csv", "large_dev.json"});
        } else if (cmd_brw->parsed()) {
            ExperimentConfig cfg = resolve_config(g);
            BrwConfig bc;
            if (brw_g == 0 || brw_b == 0 || brw_v < 0.0) {
                auto derived = brw_params_from_height(cfg.T, cfg.K, cfg.seed);
                bc = derived.config;
                std::printf("derived tree: g = %u  b = %u  v = %.6f  b^g = %.0f  "
                            "floor(log T) = %.0f\n",
                            bc.generations, bc.branching, bc.level_variance, derived.leaf_count,
                            derived.grid_points);
            }
            if (brw_g != 0) bc.generations = brw_g;
            if (brw_b != 0) bc.branching = brw_b;
            if (brw_v >= 0.0) bc.level_variance = brw_v;
            bc.seed = cfg.seed;
            auto res = simulate_max(bc, brw_trials, cfg.threads);
            const double L = static_cast<double>(bc.generations) * std::log(bc.branching);
            std::printf("brw: trials = %llu  mean_max = %.4f  sd = %.4f  ln(leaf_count) = %.4f  "
                        "ratio = %.4f\n",
                        static_cast<unsigned long long>(brw_trials), res.mean_max, res.sd_max, L,
                        res.mean_max / L);
            auto manifest = RunManifest::begin(cfg);
            auto csv = open_result(cfg, "brw.csv");
            csv << "trial,max\n";
            for (size_t i = 0; i < res.samples.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, res.samples[i]);
                csv << buf;
            }
            csv.close();
            manifest.finish({"brw.csv"});
        } else if (cmd_report->parsed()) {
            const fs::path dir(rep_dir);
            const fs::path mpath = dir / "manifest.json";
            if (!fs::exists(mpath)) {
                std::fprintf(stderr, "report: no manifest.json in %s\n", rep_dir.c_str());
                return 2;
            }
            std::ifstream in(mpath);
            nlohmann::json m;
            in >> m;
            std::printf("run %s  (version %s)\n", m.value("config_hash", "?").c_str(),
                        m.value("code_version", "?").c_str());
            std::printf("started %s  finished %s\n", m.value("started_at", "?").c_str(),
                        m.value("finished_at", "?").c_str());
            for (const auto& f : m["result_files"])
                std::printf("  result: %s%s\n", f.get<std::string>().c_str(),
                            fs::exists(dir / f.get<std::string>()) ? "" : "  [MISSING]");
            const auto orphans = find_orphans(dir);
            for (const auto& name : orphans)
                std::printf("  orphan: %s (not referenced by the manifest)\n", name.c_str());
            std::printf("%zu orphan file(s)\n", orphans.size());
        }
    } catch (const config_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const budget_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const capacity_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const precision_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const resolution_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const invalid_run_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
