#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetamax/errors.hpp"
#include "zetamax/parallel.hpp"
#include "zetamax/rng.hpp"

namespace zetamax {

// Gaussian tree surrogate for the Dirichlet sums: a rooted tree with
// `generations` levels and `branching` edges per vertex. Each edge carries an
// independent N(0, level_variance) increment; a leaf value is the sum along
// its root path. Two leaves share increments exactly on their common prefix,
// which reproduces the covariance dichotomy of the shifted polynomials.

struct BrwConfig {
    uint32_t generations = 1;   // g, matching K-1 layers of the prime partition
    uint32_t branching = 2;     // b per vertex, roughly (log T)^{1/K}
    double level_variance = 1.0; // v, variance of each G_j
    uint64_t seed = 1;
    uint64_t leaf_budget = 1ull << 24;

    uint64_t leaf_count() const {
        uint64_t n = 1;
        for (uint32_t i = 0; i < generations; ++i) {
            if (n > leaf_budget) break;
            n *= branching;
        }
        return n;
    }
    void validate() const {
        if (generations < 1) throw domain_error("BrwConfig: generations must be >= 1");
        if (branching < 1) throw domain_error("BrwConfig: branching must be >= 1");
        if (!(level_variance >= 0.0)) throw domain_error("BrwConfig: level_variance must be >= 0");
        if (leaf_count() > leaf_budget)
            throw budget_error("BrwConfig: leaf count " + std::to_string(leaf_count()) +
                               " exceeds the leaf budget of " + std::to_string(leaf_budget));
    }
};

struct BrwLeafValue {
    uint64_t leaf_index = 0;
    std::vector<double> increments; // the G_j along the root path
    double total = 0.0;             // sum of increments, exactly
};

namespace detail {
// hash chain over the path prefix: extending by one edge digit gives the key
// of the child edge. Identical prefixes yield identical keys by construction.
inline uint64_t brw_extend(uint64_t chain, uint32_t digit) {
    return mix64(chain ^ (0x9e3779b97f4a7c15ull * (digit + 1)));
}
inline double brw_edge_increment(uint64_t chain, double stddev) {
    return stddev * normal_icdf(key_to_unit(mix64(chain ^ 0xa5a5a5a55a5a5a5aull)));
}
} // namespace detail

inline BrwLeafValue leaf_field(const BrwConfig& cfg, uint64_t leaf) {
    cfg.validate();
    if (leaf >= cfg.leaf_count())
        throw std::out_of_range("leaf_field: leaf index " + std::to_string(leaf) +
                                " out of range (leaf_count " + std::to_string(cfg.leaf_count()) +
                                ")");
    const double sd = std::sqrt(cfg.level_variance);
    BrwLeafValue out;
    out.leaf_index = leaf;
    out.increments.resize(cfg.generations);
    uint64_t chain = mix64(cfg.seed);
    uint64_t denom = cfg.leaf_count();
    uint64_t rest = leaf;
    for (uint32_t level = 0; level < cfg.generations; ++level) {
        denom /= cfg.branching;
        const uint32_t digit = static_cast<uint32_t>(rest / denom);
        rest %= denom;
        chain = detail::brw_extend(chain, digit);
        out.increments[level] = detail::brw_edge_increment(chain, sd);
        out.total += out.increments[level];
    }
    return out;
}

enum class CovarianceKind { Equal, Independent };

// Exact dichotomy: increments at depth j are the same random variable iff the
// two leaves share the depth-(j+1) path prefix.
inline CovarianceKind covariance_dichotomy(const BrwConfig& cfg, uint64_t leaf_k, uint64_t leaf_l,
                                           uint32_t j) {
    cfg.validate();
    if (leaf_k >= cfg.leaf_count() || leaf_l >= cfg.leaf_count())
        throw std::out_of_range("covariance_dichotomy: leaf index out of range");
    if (j >= cfg.generations)
        throw domain_error("covariance_dichotomy: level index must be below generations");
    uint64_t denom = cfg.leaf_count();
    for (uint32_t level = 0; level <= j; ++level) denom /= cfg.branching;
    return (leaf_k / denom == leaf_l / denom) ? CovarianceKind::Equal
                                              : CovarianceKind::Independent;
}

struct BrwMaxResult {
    double mean_max = 0.0;
    double sd_max = 0.0;
    std::vector<double> samples; // one max per trial
};

// Max over all leaves of the path sum, per trial, by depth-first traversal
// with O(generations) memory; each trial uses an independent keyed stream.
inline BrwMaxResult simulate_max(const BrwConfig& cfg, uint64_t n_trials, unsigned threads = 0) {
    cfg.validate();
    if (n_trials < 1) throw domain_error("simulate_max: n_trials must be >= 1");
    const double sd = std::sqrt(cfg.level_variance);

    BrwMaxResult out;
    out.samples.resize(n_trials);
    parallel_for(n_trials, threads, [&](size_t trial) {
        const uint64_t trial_chain = mix64(mix64(cfg.seed) ^ (trial + 0x51ull));
        double best = -std::numeric_limits<double>::infinity();
        // explicit DFS stack: (level, digit) pairs
        struct Node { uint64_t chain; double partial; uint32_t level; uint32_t next_digit; };
        std::vector<Node> stack;
        stack.reserve(cfg.generations + 1);
        stack.push_back({trial_chain, 0.0, 0, 0});
        while (!stack.empty()) {
            Node& node = stack.back();
            if (node.next_digit >= cfg.branching) { stack.pop_back(); continue; }
            const uint32_t digit = node.next_digit++;
            const uint64_t child = detail::brw_extend(node.chain, digit);
            const double value = node.partial + detail::brw_edge_increment(child, sd);
            if (node.level + 1 == cfg.generations) {
                if (value > best) best = value;
            } else {
                stack.push_back({child, value, node.level + 1, 0});
            }
        }
        out.samples[trial] = best;
    });

    double mean = 0.0;
    for (double s : out.samples) mean += s;
    mean /= static_cast<double>(n_trials);
    double var = 0.0;
    for (double s : out.samples) var += (s - mean) * (s - mean);
    out.mean_max = mean;
    out.sd_max = (n_trials > 1) ? std::sqrt(var / static_cast<double>(n_trials - 1)) : 0.0;
    return out;
}

// Map the zeta-side parameters onto a tree: g = K-1, b = ceil((log T)^{1/K}),
// v = log log T / (2K). b^g rarely equals floor(log T); both are reported.
struct BrwDerivedParams {
    BrwConfig config;
    double grid_points;  // floor(log T), the shift-grid size the tree stands in for
    double leaf_count;   // b^g
};

inline BrwDerivedParams brw_params_from_height(double T, int K, uint64_t seed) {
    if (!(T >= std::exp(std::exp(1.0)))) throw domain_error("brw_params_from_height: T too small");
    if (K < 2) throw domain_error("brw_params_from_height: K must be >= 2");
    const double logT = std::log(T);
    BrwDerivedParams out;
    out.config.generations = static_cast<uint32_t>(K - 1);
    out.config.branching =
        static_cast<uint32_t>(std::ceil(std::pow(logT, 1.0 / static_cast<double>(K))));
    out.config.level_variance = std::log(logT) / (2.0 * K);
    out.config.seed = seed;
    out.grid_points = std::floor(logT);
    out.leaf_count = std::pow(static_cast<double>(out.config.branching),
                              static_cast<double>(out.config.generations));
    return out;
}

} // namespace zetamax
