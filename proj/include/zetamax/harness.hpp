#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zetamax/arith.hpp"
#include "zetamax/dirichlet.hpp"
#include "zetamax/errors.hpp"
#include "zetamax/parallel.hpp"
#include "zetamax/rng.hpp"
#include "zetamax/stats.hpp"
#include "zetamax/zeta.hpp"

namespace zetamax {

inline constexpr const char* kCodeVersion = "zetamax 0.1.0";

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    double T = 0.0;
    int K = 0;
    std::optional<double> sigma0_override;
    std::optional<uint32_t> nu_override;
    uint64_t seed = 1;
    uint64_t samples = 100;
    unsigned threads = 0; // 0: use all hardware threads; results never depend on this
    double interval_half_width = 1.0;
    double proxy_half_width = 0.25;
    uint64_t tau_grid_count = 0; // 0: default floor(log T)
    double lambda = 0.6;
    std::string output_dir = "out";

    uint64_t effective_tau_grid_count() const {
        return tau_grid_count ? tau_grid_count
                              : static_cast<uint64_t>(std::floor(std::log(T)));
    }

    void validate() const {
        std::vector<std::string> issues;
        if (!(T >= std::exp(std::exp(1.0))))
            issues.push_back("t: must be >= e^e (log log T must be positive)");
        if (K < 4) issues.push_back("k: must be >= 4");
        if (samples < 1) issues.push_back("samples: must be >= 1");
        if (!(lambda > 0.0 && lambda < 1.0))
            issues.push_back("lambda: must lie in the open interval (0,1)");
        if (!(interval_half_width > 0.0 && interval_half_width <= 2.0))
            issues.push_back("interval_half_width: must lie in (0,2]");
        if (!(proxy_half_width > 0.0 && proxy_half_width <= 1.0))
            issues.push_back("proxy_half_width: must lie in (0,1]");
        if (sigma0_override && !(*sigma0_override > 0.5))
            issues.push_back("sigma0_override: must be > 1/2");
        if (!issues.empty()) throw config_error(std::move(issues));
    }
};

namespace detail {
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["t"] = c.T;
    j["k"] = c.K;
    if (c.sigma0_override) j["sigma0_override"] = *c.sigma0_override;
    if (c.nu_override) j["nu_override"] = *c.nu_override;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["threads"] = c.threads;
    j["interval_half_width"] = c.interval_half_width;
    j["proxy_half_width"] = c.proxy_half_width;
    j["tau_grid_count"] = c.tau_grid_count;
    j["lambda"] = c.lambda;
    j["output_dir"] = c.output_dir;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "t", "k", "sigma0_override", "nu_override", "seed", "samples", "threads",
        "interval_half_width", "proxy_half_width", "tau_grid_count", "lambda", "output_dir"};
    std::vector<std::string> issues;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            issues.push_back("unknown key: " + it.key());
    }
    if (!j.contains("t")) issues.push_back("missing required key: t");
    if (!j.contains("k")) issues.push_back("missing required key: k");
    if (!j.contains("seed")) issues.push_back("missing required key: seed");
    if (!issues.empty()) throw config_error(std::move(issues));

    ExperimentConfig c;
    c.T = j.at("t").get<double>();
    c.K = j.at("k").get<int>();
    if (j.contains("sigma0_override")) c.sigma0_override = j["sigma0_override"].get<double>();
    if (j.contains("nu_override")) c.nu_override = j["nu_override"].get<uint32_t>();
    c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("samples")) c.samples = j["samples"].get<uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("interval_half_width"))
        c.interval_half_width = j["interval_half_width"].get<double>();
    if (j.contains("proxy_half_width")) c.proxy_half_width = j["proxy_half_width"].get<double>();
    if (j.contains("tau_grid_count")) c.tau_grid_count = j["tau_grid_count"].get<uint64_t>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error({"cannot open config file: " + path});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error({std::string("config parse error: ") + e.what()});
    }
    return config_from_json(j);
}

// FNV-1a over the canonical (sorted-key) serialization.
inline std::string config_hash(const ExperimentConfig& c) {
    const std::string canon = config_to_json(c).dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Run manifest: written before any result file, finalized afterwards
// ---------------------------------------------------------------------------

struct RunManifest {
    ExperimentConfig config;
    std::string hash;
    std::string code_version = kCodeVersion;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> result_files;
    std::filesystem::path dir;

    static std::string timestamp() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::tm tm{};
        gmtime_r(&tt, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    static RunManifest begin(const ExperimentConfig& cfg) {
        RunManifest m;
        m.config = cfg;
        m.hash = config_hash(cfg);
        m.started_at = timestamp();
        m.dir = cfg.output_dir;
        std::filesystem::create_directories(m.dir);
        m.write();
        return m;
    }

    void write() const {
        nlohmann::json j;
        j["config"] = config_to_json(config);
        j["config_hash"] = hash;
        j["code_version"] = code_version;
        j["started_at"] = started_at;
        j["finished_at"] = finished_at;
        j["result_files"] = result_files;
        std::ofstream out(dir / "manifest.json");
        out << j.dump(2) << "\n";
    }

    void finish(std::vector<std::string> files) {
        result_files = std::move(files);
        finished_at = timestamp();
        write();
    }
};

// Files in a run directory that no manifest references (manifest.json itself
// excluded). A clean run directory has none.
inline std::vector<std::string> find_orphans(const std::filesystem::path& dir) {
    std::vector<std::string> orphans;
    std::ifstream in(dir / "manifest.json");
    if (!in) return orphans;
    nlohmann::json m;
    in >> m;
    std::vector<std::string> referenced;
    for (const auto& f : m["result_files"]) referenced.push_back(f.get<std::string>());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        if (std::find(referenced.begin(), referenced.end(), name) == referenced.end())
            orphans.push_back(name);
    }
    std::sort(orphans.begin(), orphans.end());
    return orphans;
}

// ---------------------------------------------------------------------------
// Sample records and quantiles
// ---------------------------------------------------------------------------

struct SampleRecord {
    uint64_t sample_index = 0;
    double t = 0.0;
    IntervalMax zeta_max;
    bool failed = false;
};

inline double quantile(std::vector<double> xs, double p) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const double idx = p * static_cast<double>(xs.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(idx));
    const size_t hi = std::min(xs.size() - 1, lo + 1);
    const double frac = idx - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

// ---------------------------------------------------------------------------
// FHK experiment: max of log|zeta| over random unit intervals
// ---------------------------------------------------------------------------

struct FhkSummary {
    std::string config_hash;
    double p10 = 0.0, p50 = 0.0, p90 = 0.0;
    double loglogT = 0.0;
    double fhk_prediction = 0.0; // log log T - (3/4) log log log T
    uint64_t failures = 0;
    bool valid = true;
    std::vector<SampleRecord> records;
};

inline FhkSummary run_fhk_sample(const ExperimentConfig& cfg, double points_per_log_unit = 2.0,
                                 unsigned refine_iters = 12) {
    cfg.validate();
    if (!(cfg.T <= 1e8))
        throw domain_error("run_fhk_sample: T must be <= 1e8 (zeta-engine ceiling)");
    RunManifest manifest = RunManifest::begin(cfg);

    std::vector<SampleRecord> records(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](size_t i) {
        SampleRecord& rec = records[i];
        rec.sample_index = i;
        rec.t = cfg.T * (1.0 + uniform01(cfg.seed, i));
        try {
            rec.zeta_max = interval_max_log_abs_zeta(rec.t, cfg.interval_half_width,
                                                     points_per_log_unit, refine_iters);
        } catch (const std::exception&) {
            rec.failed = true;
        }
    });

    FhkSummary summary;
    summary.config_hash = manifest.hash;
    summary.loglogT = std::log(std::log(cfg.T));
    summary.fhk_prediction = summary.loglogT - 0.75 * std::log(summary.loglogT);

    std::vector<double> values;
    for (const auto& r : records) {
        if (r.failed)
            ++summary.failures;
        else
            values.push_back(r.zeta_max.value);
    }
    summary.p10 = quantile(values, 0.10);
    summary.p50 = quantile(values, 0.50);
    summary.p90 = quantile(values, 0.90);
    summary.valid = summary.failures * 100 <= cfg.samples; // > 1% failures marks the run invalid

    // results: CSV first, then summary, then the manifest is finalized
    {
        std::ofstream csv(manifest.dir / "fhk_samples.csv");
        csv << "sample_index,t,u_star,max_log_abs_zeta,grid_spacing,refined\n";
        for (const auto& r : records) {
            if (r.failed) continue;
            csv << r.sample_index << ',' << detail::fmt17(r.t) << ','
                << detail::fmt17(r.zeta_max.u_star) << ',' << detail::fmt17(r.zeta_max.value)
                << ',' << detail::fmt17(r.zeta_max.grid_spacing) << ','
                << (r.zeta_max.refined ? 1 : 0) << '\n';
        }
    }
    {
        nlohmann::json j;
        j["config_hash"] = summary.config_hash;
        j["quantiles"] = {{"p10", summary.p10}, {"p50", summary.p50}, {"p90", summary.p90}};
        j["loglogT"] = summary.loglogT;
        j["fhk_prediction"] = summary.fhk_prediction;
        j["failures"] = summary.failures;
        j["valid"] = summary.valid;
        j["grid_points_per_log_unit"] = points_per_log_unit;
        j["refine_iters"] = refine_iters;
        std::ofstream out(manifest.dir / "summary.json");
        out << j.dump(2) << "\n";
    }
    manifest.finish({"fhk_samples.csv", "summary.json"});
    summary.records = std::move(records);
    if (!summary.valid)
        throw invalid_run_error("run_fhk_sample: more than 1% of samples failed (" +
                                std::to_string(summary.failures) + "/" +
                                std::to_string(cfg.samples) + ")");
    return summary;
}

// ---------------------------------------------------------------------------
// Proxy comparison: Dirichlet-polynomial events against the zeta maximum
// ---------------------------------------------------------------------------

struct ProxySample {
    uint64_t sample_index = 0;
    double t = 0.0;
    double proxy_min_max = 0.0;  // max over the tau grid of min_{1<=j<=K-3} P_j
    double proxy_sum_max = 0.0;  // max over the tau grid of sum_{j=1}^{K-3} P_j
    double zeta_moll_dev = 0.0;  // max over the tau grid of |zeta M - 1| at sigma0
    double moll_exp_dev = 0.0;   // |M - exp(-sum fancyP_j)| at the center
    double zeta_max = 0.0;       // max log|zeta(1/2+iu)|, |u-t| <= interval_half_width
    bool proxy_event = false;
    bool zeta_event_plain = false;
    bool zeta_event_slacked = false;
    bool mollifier_skipped = false;
};

struct ProxySummary {
    std::string config_hash;
    double proxy_event_freq = 0.0;
    double joint_freq_plain = 0.0;   // proxy event AND zeta_max > lambda(1-3/K) loglogT
    double joint_freq_slacked = 0.0; // same with the additive slack subtracted
    double median_zeta_moll_dev = 0.0;
    double median_moll_exp_dev = 0.0;
    double threshold_proxy = 0.0;
    double threshold_zeta_plain = 0.0;
    double threshold_zeta_slacked = 0.0;
    double slack = 0.0;
    uint64_t mollifier_skips = 0;
    std::vector<ProxySample> samples;
};

inline ProxySummary run_proxy_comparison(const ExperimentConfig& cfg, const PrimeTable& table) {
    cfg.validate();
    if (!(cfg.T <= 1e8)) throw domain_error("run_proxy_comparison: T must be <= 1e8");
    RunManifest manifest = RunManifest::begin(cfg);

    const Partition part = make_partition(cfg.T, cfg.K, cfg.sigma0_override, table);
    const uint32_t nu = cfg.nu_override ? *cfg.nu_override : default_nu(part);
    const uint64_t cap = default_mollifier_cap(part, nu);
    const double llT = part.log_log_T();

    std::optional<Mollifier> moll;
    bool moll_failed = false;
    try {
        moll.emplace(table, part, nu, cap);
    } catch (const budget_error&) {
        moll_failed = true; // (c)/(d) are skipped with a flag
    }

    const uint64_t ntau = std::max<uint64_t>(1, cfg.effective_tau_grid_count());
    std::vector<double> taus(ntau);
    if (ntau == 1) {
        taus[0] = 0.0;
    } else {
        for (uint64_t l = 0; l < ntau; ++l)
            taus[l] = -cfg.proxy_half_width +
                      2.0 * cfg.proxy_half_width * static_cast<double>(l) /
                          static_cast<double>(ntau - 1);
    }

    const double threshold_proxy = cfg.lambda / cfg.K * llT;
    const double threshold_plain = cfg.lambda * (1.0 - 3.0 / cfg.K) * llT;
    // Additive slack of the reduction step, with V = (log T)^lambda. At desk
    // scale it dwarfs log log T, so the slacked event is nearly always on;
    // both comparisons are reported rather than only the slacked one.
    const double slack = std::log(8.0) + cfg.lambda * llT + std::log(llT) +
                         20.0 / std::sqrt(static_cast<double>(cfg.K)) * llT;

    std::vector<ProxySample> samples(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](size_t i) {
        ProxySample& s = samples[i];
        s.sample_index = i;
        s.t = cfg.T * (1.0 + uniform01(cfg.seed, i));
        const double t0 = s.t - cfg.proxy_half_width;
        const double delta =
            (ntau == 1) ? 1.0 : 2.0 * cfg.proxy_half_width / static_cast<double>(ntau - 1);

        // per-layer values over the grid (the shifted prime polynomials)
        std::vector<PolyGrid> grids;
        grids.reserve(cfg.K - 3);
        for (int j = 1; j <= cfg.K - 3; ++j)
            grids.push_back((ntau == 1)
                                ? eval_grid(part, j, s.t, 1.0, 1)
                                : eval_grid(part, j, t0, delta, ntau));

        double best_min = -std::numeric_limits<double>::infinity();
        double best_sum = -std::numeric_limits<double>::infinity();
        for (uint64_t l = 0; l < ntau; ++l) {
            double mn = std::numeric_limits<double>::infinity();
            double sm = 0.0;
            for (const auto& g : grids) {
                const double pj = g.values[l].real();
                mn = std::min(mn, pj);
                sm += pj;
            }
            best_min = std::max(best_min, mn);
            best_sum = std::max(best_sum, sm);
        }
        s.proxy_min_max = best_min;
        s.proxy_sum_max = best_sum;

        if (moll) {
            double worst = 0.0;
            for (uint64_t l = 0; l < ntau; ++l) {
                const double u = (ntau == 1) ? s.t : t0 + delta * static_cast<double>(l);
                const auto mz = moll->eval(u);
                const auto zz = euler_maclaurin_zeta(part.sigma0, u, 0, 1e-10);
                worst = std::max(worst, std::abs(zz.value() * mz.value - 1.0));
            }
            s.zeta_moll_dev = worst;
            const auto mcenter = moll->eval(s.t);
            s.moll_exp_dev =
                std::abs(mcenter.value - std::exp(-eval_fancy_poly_sum(part, s.t)));
        } else {
            s.mollifier_skipped = true;
        }

        s.zeta_max = interval_max_log_abs_zeta(s.t, cfg.interval_half_width, 2.0, 12).value;
        s.proxy_event = s.proxy_min_max > threshold_proxy;
        s.zeta_event_plain = s.zeta_max > threshold_plain;
        s.zeta_event_slacked = s.zeta_max > threshold_plain - slack;
    });

    ProxySummary summary;
    summary.config_hash = manifest.hash;
    summary.threshold_proxy = threshold_proxy;
    summary.threshold_zeta_plain = threshold_plain;
    summary.threshold_zeta_slacked = threshold_plain - slack;
    summary.slack = slack;
    std::vector<double> cdevs, ddevs;
    uint64_t proxy_hits = 0, joint_plain = 0, joint_slacked = 0;
    for (const auto& s : samples) {
        if (s.mollifier_skipped) {
            ++summary.mollifier_skips;
        } else {
            cdevs.push_back(s.zeta_moll_dev);
            ddevs.push_back(s.moll_exp_dev);
        }
        proxy_hits += s.proxy_event;
        joint_plain += (s.proxy_event && s.zeta_event_plain);
        joint_slacked += (s.proxy_event && s.zeta_event_slacked);
    }
    const double n = static_cast<double>(cfg.samples);
    summary.proxy_event_freq = proxy_hits / n;
    summary.joint_freq_plain = joint_plain / n;
    summary.joint_freq_slacked = joint_slacked / n;
    summary.median_zeta_moll_dev = quantile(cdevs, 0.5);
    summary.median_moll_exp_dev = quantile(ddevs, 0.5);
    (void)moll_failed;

    {
        std::ofstream csv(manifest.dir / "proxy_samples.csv");
        csv << "sample_index,t,proxy_min_max,proxy_sum_max,zeta_moll_dev,moll_exp_dev,zeta_max,"
               "proxy_event,zeta_event_plain,zeta_event_slacked,mollifier_skipped\n";
        for (const auto& s : samples) {
            csv << s.sample_index << ',' << detail::fmt17(s.t) << ','
                << detail::fmt17(s.proxy_min_max) << ',' << detail::fmt17(s.proxy_sum_max) << ','
                << detail::fmt17(s.zeta_moll_dev) << ',' << detail::fmt17(s.moll_exp_dev) << ','
                << detail::fmt17(s.zeta_max) << ',' << (s.proxy_event ? 1 : 0) << ','
                << (s.zeta_event_plain ? 1 : 0) << ',' << (s.zeta_event_slacked ? 1 : 0) << ','
                << (s.mollifier_skipped ? 1 : 0) << '\n';
        }
    }
    {
        nlohmann::json j;
        j["config_hash"] = summary.config_hash;
        j["proxy_event_freq"] = summary.proxy_event_freq;
        j["joint_freq_plain"] = summary.joint_freq_plain;
        j["joint_freq_slacked"] = summary.joint_freq_slacked;
        j["median_zeta_moll_dev"] = summary.median_zeta_moll_dev;
        j["median_moll_exp_dev"] = summary.median_moll_exp_dev;
        j["threshold_proxy"] = summary.threshold_proxy;
        j["threshold_zeta_plain"] = summary.threshold_zeta_plain;
        j["threshold_zeta_slacked"] = summary.threshold_zeta_slacked;
        j["slack"] = summary.slack;
        j["mollifier_skips"] = summary.mollifier_skips;
        j["mollifier_terms"] = moll ? moll->term_count() : 0;
        j["mollifier_tail_rms"] = moll ? moll->tail_rms() : 0.0;
        j["nu"] = nu;
        j["cap"] = cap;
        std::ofstream out(manifest.dir / "proxy_summary.json");
        out << j.dump(2) << "\n";
    }
    manifest.finish({"proxy_samples.csv", "proxy_summary.json"});
    summary.samples = std::move(samples);
    return summary;
}

// ---------------------------------------------------------------------------
// Upper-bound check (Chebyshev-type bound on the interval maximum)
// ---------------------------------------------------------------------------

struct UpperBoundSummary {
    std::string config_hash;
    double V = 0.0;
    double empirical_freq = 0.0;   // P(max |zeta| > V log T)
    double chebyshev_constant = 0.0; // C = E[max^2] / (log T)^2
    double bound = 0.0;            // C / V^2
    std::vector<double> interval_max_abs;
};

inline UpperBoundSummary run_upper_bound_check(const ExperimentConfig& cfg, double V) {
    cfg.validate();
    if (!(V >= 2.0)) throw domain_error("run_upper_bound_check: V must be >= 2");
    RunManifest manifest = RunManifest::begin(cfg);

    const double logT = std::log(cfg.T);
    std::vector<double> maxima(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](size_t i) {
        const double t = cfg.T * (1.0 + uniform01(cfg.seed, i));
        const auto im = interval_max_log_abs_zeta(t, cfg.interval_half_width, 2.0, 12);
        maxima[i] = std::exp(im.value); // modulus, not log
    });

    UpperBoundSummary summary;
    summary.config_hash = manifest.hash;
    summary.V = V;
    double m2 = 0.0;
    uint64_t hits = 0;
    for (double m : maxima) {
        m2 += m * m;
        if (m > V * logT) ++hits;
    }
    m2 /= static_cast<double>(cfg.samples);
    summary.chebyshev_constant = m2 / (logT * logT);
    summary.bound = summary.chebyshev_constant / (V * V);
    summary.empirical_freq = static_cast<double>(hits) / static_cast<double>(cfg.samples);
    summary.interval_max_abs = maxima;

    {
        std::ofstream csv(manifest.dir / "upper_bound_samples.csv");
        csv << "sample_index,interval_max_abs\n";
        for (size_t i = 0; i < maxima.size(); ++i)
            csv << i << ',' << detail::fmt17(maxima[i]) << '\n';
    }
    {
        nlohmann::json j;
        j["config_hash"] = summary.config_hash;
        j["V"] = V;
        j["empirical_freq"] = summary.empirical_freq;
        j["chebyshev_constant"] = summary.chebyshev_constant;
        j["bound"] = summary.bound;
        std::ofstream out(manifest.dir / "upper_bound_summary.json");
        out << j.dump(2) << "\n";
    }
    manifest.finish({"upper_bound_samples.csv", "upper_bound_summary.json"});
    return summary;
}

} // namespace zetamax
