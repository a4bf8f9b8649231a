#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>

#include "zetamax/dirichlet.hpp"
#include "zetamax/rng.hpp"

using namespace zetamax;

namespace {
PrimeTable& desk_table() {
    static PrimeTable t = sieve_primes(1000000);
    return t;
}
Partition& desk_partition() { // T = 1e7, K = 4
    static Partition p = make_partition(1e7, 4, std::nullopt, desk_table());
    return p;
}
} // namespace

TEST_CASE("partition reproduces the desk-scale constants") {
    const auto& p = desk_partition();
    REQUIRE(p.X == Catch::Approx(3115.8121985088565).epsilon(1e-12));
    REQUIRE(p.sigma0 == Catch::Approx(0.6759660638729659).epsilon(1e-12));
    REQUIRE(p.ranges.size() == 3);
    REQUIRE(p.ranges[0].first == 2.0);
    REQUIRE(p.ranges[0].second == Catch::Approx(7.41630027847374).epsilon(1e-12));
    REQUIRE(p.ranges[1].second == Catch::Approx(55.40860003618759).epsilon(1e-12));
    REQUIRE(p.ranges[2].second == Catch::Approx(p.X).epsilon(1e-14));
    // (sigma0 - 1/2) log(sup J_{K-3}) = (log T)^{-1/(2K)}
    const double lhs = (p.sigma0 - 0.5) * std::log(p.ranges[1].second);
    REQUIRE(lhs == Catch::Approx(std::pow(p.log_T, -0.125)).epsilon(1e-12));
    REQUIRE(lhs == Catch::Approx(0.70645).margin(5e-5));
}

TEST_CASE("partition ranges are disjoint, ordered, and union to [2, X]") {
    uint64_t seed = 31337;
    for (int rep = 0; rep < 10; ++rep) {
        const double T = 1e4 + 1e7 * uniform01(seed, rep);
        const int K = 4 + static_cast<int>(4 * uniform01(seed, 100 + rep));
        auto part = make_partition(T, K, std::nullopt, desk_table());
        REQUIRE(part.ranges.size() == static_cast<size_t>(K - 1));
        REQUIRE(part.ranges.front().first == 2.0);
        for (size_t j = 1; j < part.ranges.size(); ++j)
            REQUIRE(part.ranges[j].first == part.ranges[j - 1].second);
        REQUIRE(part.ranges.back().second == Catch::Approx(part.X).epsilon(1e-14));
        // every prime <= X lands in exactly one layer
        size_t total = 0;
        for (const auto& layer : part.layers) total += layer.primes.size();
        REQUIRE(total == desk_table().upper_bound(part.X));
        for (const auto& layer : part.layers)
            for (size_t i = 0; i < layer.primes.size(); ++i) {
                const double pv = static_cast<double>(layer.primes[i]);
                REQUIRE(pv <= part.ranges[layer.j].second);
                if (layer.j > 0) REQUIRE(pv > part.ranges[layer.j].first);
                if (i > 0) REQUIRE(layer.weight[i] < layer.weight[i - 1]);
            }
    }
}

TEST_CASE("partition error cases") {
    REQUIRE_THROWS_AS(make_partition(1e7, 3, std::nullopt, desk_table()), domain_error);
    REQUIRE_THROWS_AS(make_partition(10.0, 4, std::nullopt, desk_table()), domain_error);
    auto small = sieve_primes(100);
    REQUIRE_THROWS_AS(make_partition(1e7, 4, std::nullopt, small), coverage_error);
    REQUIRE_THROWS_WITH(make_partition(1e7, 4, std::nullopt, small),
                        Catch::Matchers::ContainsSubstring("3115.8"));
    // sigma0 override is recorded
    auto forced = make_partition(1e5, 4, 0.8, desk_table());
    REQUIRE(forced.sigma0 == 0.8);
    REQUIRE(forced.sigma0_overridden);
}

TEST_CASE("layer covariance: exact sums and the tau = 0 identity") {
    const auto& p = desk_partition();
    auto c0 = layer_covariance(p, 1, 0.0);
    REQUIRE(c0.rho == c0.s2); // cos 0 = 1, exactly
    REQUIRE(c0.s2 == Catch::Approx(0.08789343699612362).epsilon(1e-12));
    REQUIRE(c0.asymptotic_s2 == Catch::Approx(p.log_log_T() / 8.0).epsilon(1e-14));

    // |rho| <= s2 always
    uint64_t seed = 555;
    for (int i = 0; i < 100; ++i) {
        const double tau = 2.0 * uniform01(seed, i) - 1.0;
        auto c = layer_covariance(p, 1, tau);
        REQUIRE(std::fabs(c.rho) <= c.s2 + 1e-18);
    }

    // desk-scale anti-correlation at tau = 1 (the asymptotics say ~0; the
    // exact sum does not --- all predictions downstream use the exact value)
    auto c1 = layer_covariance(p, 1, 1.0);
    REQUIRE(c1.rho == Catch::Approx(-0.0762518).margin(2e-6));
    REQUIRE(c1.asymptotic_rho == 0.0);
}

TEST_CASE("variance identity against prime_power_sum") {
    const auto& p = desk_partition();
    for (int j = 0; j < p.layer_count(); ++j) {
        auto cov = layer_covariance(p, j, 0.0);
        const double lo = p.ranges[j].first, hi = p.ranges[j].second;
        const double direct = (j == 0)
                                  ? prime_power_sum(2.0, hi, p.sigma0, desk_table()).value
                                  : prime_power_sum_open(lo, hi, p.sigma0, desk_table());
        REQUIRE(cov.s2 == Catch::Approx(0.5 * direct).epsilon(1e-13));
    }
}

TEST_CASE("prime polynomial point evaluations") {
    const auto& p = desk_partition();
    SECTION("u = 0 gives the positive weight sum") {
        auto v = eval_prime_poly(p, 1, 0.0);
        REQUIRE(v.imag() == 0.0);
        double expect = 0.0;
        for (double w : p.layers[1].weight) expect += w;
        REQUIRE(v.real() == Catch::Approx(expect).epsilon(1e-15));
    }
    SECTION("single-prime layer has constant modulus") {
        Partition tiny;
        tiny.T = 1e4;
        tiny.K = 4;
        tiny.sigma0 = 0.7;
        tiny.log_T = std::log(1e4);
        tiny.X = 20.0;
        tiny.ranges = {{2, 5}, {5, 11}, {11, 20}};
        PrimeLayer layer;
        layer.j = 1;
        layer.primes = {7};
        layer.log_p = {std::log(7.0)};
        layer.weight = {std::pow(7.0, -0.7)};
        tiny.layers = {PrimeLayer{0, {}, {}, {}}, layer, PrimeLayer{2, {}, {}, {}}};
        uint64_t seed = 12;
        for (int i = 0; i < 10; ++i) {
            const double u = 1e4 * uniform01(seed, i);
            REQUIRE(std::abs(eval_prime_poly(tiny, 1, u)) ==
                    Catch::Approx(std::pow(7.0, -0.7)).epsilon(1e-14));
        }
    }
    SECTION("conjugate symmetry") {
        uint64_t seed = 77;
        for (int i = 0; i < 10; ++i) {
            const double u = 1e6 * uniform01(seed, i);
            auto a = eval_prime_poly(p, 2, u);
            auto b = eval_prime_poly(p, 2, -u);
            REQUIRE(b.real() == Catch::Approx(a.real()).margin(1e-12));
            REQUIRE(b.imag() == Catch::Approx(-a.imag()).margin(1e-12));
        }
    }
    SECTION("P_j is the real part") {
        const double u = 31.7;
        REQUIRE(eval_P(p, 1, u) == Catch::Approx(eval_prime_poly(p, 1, u).real()).margin(1e-16));
    }
}

TEST_CASE("fancy polynomials include the prime powers with 1/k weights") {
    const auto& p = desk_partition();
    // J_0 = [2, 7.416] contains exactly one higher power: 4 = 2^2
    const double u = 3.25;
    const auto diff0 = eval_fancy_poly(p, 0, u) - eval_prime_poly(p, 0, u);
    const std::complex<double> four =
        0.5 * std::polar(std::pow(4.0, -p.sigma0), -u * std::log(4.0));
    REQUIRE(std::abs(diff0 - four) <= 1e-15);

    // layer J_1 = (7.416, 55.41]: powers 8, 16, 32 (of 2), 9, 27 (of 3), 25, 49
    const auto diff1 = eval_fancy_poly(p, 1, u) - eval_prime_poly(p, 1, u);
    std::complex<double> expect{};
    const std::pair<double, int> powers[] = {{8, 3}, {16, 4}, {32, 5}, {9, 2}, {27, 3}, {25, 2}, {49, 2}};
    for (auto [n, k] : powers)
        expect += std::polar(std::pow(n, -p.sigma0) / k, -u * std::log(n));
    REQUIRE(std::abs(diff1 - expect) <= 1e-15);
}

TEST_CASE("Q(t): squares dominate, cube tail bounds the difference") {
    const auto& p = desk_partition();
    auto q0 = eval_Q(p, 0.0);
    REQUIRE(q0.value.real() > 0.0);
    REQUIRE(q0.value.imag() == Catch::Approx(0.0).margin(1e-15));
    // squares are the largest contribution; at desk scale the cube-and-higher
    // terms are an order-one fraction at this scale
    REQUIRE(q0.squares_approx.real() > 0.5 * q0.value.real());

    // sum_j (fancyP_j - P~_j)(0) - (1/2) sum_{p<=sqrt X} p^{-2 sigma0} <= cube tail
    double squares = 0.0;
    for (size_t i = 0; i < desk_table().count(); ++i) {
        const double pv = static_cast<double>(desk_table().primes[i]);
        if (pv * pv > p.X) break;
        squares += 0.5 * std::pow(pv, -2.0 * p.sigma0);
    }
    REQUIRE(q0.squares_approx.real() == Catch::Approx(squares).epsilon(1e-13));
    REQUIRE(std::fabs(q0.value.real() - squares) <= q0.cube_tail_bound);

    uint64_t seed = 2024;
    for (int i = 0; i < 100; ++i) {
        const double t = 1e7 * (1.0 + uniform01(seed, i));
        auto q = eval_Q(p, t);
        REQUIRE(std::abs(q.value - q.squares_approx) <= q.cube_tail_bound + 1e-15);
    }
}

TEST_CASE("Q of an empty partition is zero") {
    Partition empty;
    empty.T = 16.0;
    empty.K = 4;
    empty.sigma0 = 0.7;
    empty.log_T = std::log(16.0);
    empty.X = 3.9; // no prime squares fit below 4
    empty.ranges = {{2, 2.5}, {2.5, 3.0}, {3.0, 3.9}};
    empty.layers.resize(3);
    auto q = eval_Q(empty, 17.0);
    REQUIRE(q.value == std::complex<double>{});
    REQUIRE(q.cube_tail_bound == 0.0);
}

TEST_CASE("shift grid equals direct evaluation") {
    const auto& p = desk_partition();
    SECTION("degenerate single-point grid") {
        auto g = eval_grid(p, 1, 12345.6, 1.0, 1);
        REQUIRE(g.values[0] == eval_prime_poly(p, 1, 12345.6));
    }
    SECTION("grid at the sampling height, checked at random offsets") {
        const double t0 = 1e7, delta = 1.0 / p.log_T;
        const uint64_t count = static_cast<uint64_t>(p.log_T);
        auto g = eval_grid(p, 1, t0, delta, count);
        double norm = 0.0;
        for (double w : p.layers[1].weight) norm += w;
        uint64_t seed = 8;
        for (int i = 0; i < 10; ++i) {
            const uint64_t k = static_cast<uint64_t>(count * uniform01(seed, i));
            const auto direct = eval_prime_poly(p, 1, t0 + static_cast<double>(k) * delta);
            CAPTURE(k);
            // 1e-9 relative to the layer amplitude norm: at t ~ 1e7 the phases
            // themselves are only defined in double to ~eps * t * log p
            REQUIRE(std::abs(g.values[k] - direct) <= 1e-9 * norm);
        }
    }
    SECTION("long grid at moderate height, strict tolerance, all points") {
        const double t0 = 1e4, delta = 0.01;
        const uint64_t count = 10000;
        auto g = eval_grid(p, 2, t0, delta, count, 1024);
        double norm = 0.0;
        for (double w : p.layers[2].weight) norm += w;
        for (uint64_t k = 0; k < count; k += 97) {
            const auto direct = eval_prime_poly(p, 2, t0 + static_cast<double>(k) * delta);
            REQUIRE(std::abs(g.values[k] - direct) <= 1e-9 * norm);
        }
    }
    SECTION("bit-identical across worker counts") {
        auto g1 = eval_grid(p, 2, 5e6, 0.003, 512, 64, 1);
        auto g2 = eval_grid(p, 2, 5e6, 0.003, 512, 64, 2);
        auto g4 = eval_grid(p, 2, 5e6, 0.003, 512, 64, 4);
        for (uint64_t k = 0; k < 512; ++k) {
            REQUIRE(g1.values[k] == g2.values[k]);
            REQUIRE(g1.values[k] == g4.values[k]);
        }
    }
    SECTION("argument validation") {
        REQUIRE_THROWS_AS(eval_grid(p, 1, 0.0, 0.1, 0), domain_error);
        REQUIRE_THROWS_AS(eval_grid(p, 1, 0.0, -0.1, 10), domain_error);
        REQUIRE_THROWS_AS(eval_grid(p, 1, 0.0, 0.1, 10, 8), domain_error);
        REQUIRE_THROWS_AS(eval_grid(p, 99, 0.0, 0.1, 10), domain_error);
    }
}

TEST_CASE("shift grid CSV export") {
    const auto& p = desk_partition();
    auto g = eval_grid(p, 1, 100.0, 0.5, 3);
    std::ostringstream os;
    write_polygrid_csv(g, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    REQUIRE(header == "k,u,re,im");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    REQUIRE(rows == 3);
}

TEST_CASE("shift grid throughput scales with count * layer size", "[benchmark]") {
    const auto& p = desk_partition();
    volatile double sink = 0.0;
    auto time_of = [&](uint64_t count) {
        double best = 1e18;
        for (int rep = 0; rep < 5; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            auto g = eval_grid(p, 2, 1e6, 0.001, count, 1024, 1);
            const auto stop = std::chrono::steady_clock::now();
            sink = sink + g.values[count / 2].real();
            best = std::min(best, std::chrono::duration<double>(stop - start).count());
        }
        return best;
    };
    const double t1 = time_of(3000);
    const double t4 = time_of(12000);
    REQUIRE(t4 / t1 >= 4.0 / 1.3);
    REQUIRE(t4 / t1 <= 4.0 * 1.3);
}

TEST_CASE("mollifier exact small case") {
    // X just under 10 so the prime set is {2,3,5,7}; sigma0 = 1 override.
    // M(0) = 1 - (1/2+1/3+1/5+1/7) + (1/6+1/10+1/14+1/15+1/21+1/35) = 32/105
    auto table = sieve_primes(50);
    auto part = make_partition(20.886, 4, 1.0, table);
    REQUIRE(part.X > 7.0);
    REQUIRE(part.X < 10.0);
    auto mv = eval_mollifier(table, part, 0.0, 2, 40);
    REQUIRE(mv.term_count == 11);
    REQUIRE(mv.value.real() == Catch::Approx(32.0 / 105.0).epsilon(1e-14));
    REQUIRE(mv.value.imag() == Catch::Approx(0.0).margin(1e-16));

    SECTION("nu = 0 keeps only n = 1") {
        auto one = eval_mollifier(table, part, 17.3, 0, 40);
        REQUIRE(one.value == std::complex<double>{1.0, 0.0});
    }
    SECTION("conjugate symmetry") {
        Mollifier moll(table, part, 2, 40);
        uint64_t seed = 15;
        for (int i = 0; i < 10; ++i) {
            const double t = 1e3 * uniform01(seed, i);
            auto a = moll.eval(t).value;
            auto b = moll.eval(-t).value;
            REQUIRE(b.real() == Catch::Approx(a.real()).margin(1e-13));
            REQUIRE(b.imag() == Catch::Approx(-a.imag()).margin(1e-13));
        }
    }
    SECTION("budget error propagates") {
        REQUIRE_THROWS_AS(eval_mollifier(table, part, 0.0, 2, 40, 5), budget_error);
    }
}

TEST_CASE("truncated exponential of the fancy sum") {
    const auto& p = desk_partition();
    SECTION("nu = 0 is identically 1") {
        REQUIRE(eval_truncated_exp(p, 777.7, 0) == std::complex<double>{1.0, 0.0});
    }
    SECTION("tail inequality |fancyM - exp(-z)| <= e^{-nu} for nu >= 10(|z|+1)") {
        uint64_t seed = 21;
        for (int i = 0; i < 20; ++i) {
            const double t = 1e7 * (1.0 + uniform01(seed, i));
            const auto z = eval_fancy_poly_sum(p, t);
            const uint32_t nu = static_cast<uint32_t>(std::ceil(10.0 * (std::abs(z) + 1.0)));
            const auto truncated = eval_truncated_exp(p, t, nu);
            REQUIRE(std::abs(truncated - std::exp(-z)) <= std::exp(-double(nu)) + 1e-16);
        }
    }
    SECTION("paper-scale nu makes the truncation invisible") {
        auto table = sieve_primes(10000);
        auto part = make_partition(1e5, 4, std::nullopt, table);
        const uint32_t nu = default_nu(part);
        uint64_t seed = 22;
        for (int i = 0; i < 20; ++i) {
            const double t = 1e5 * (1.0 + uniform01(seed, i));
            const auto z = eval_fancy_poly_sum(part, t);
            REQUIRE(std::abs(eval_truncated_exp(part, t, nu) - std::exp(-z)) <= 1e-10);
        }
    }
}

TEST_CASE("mollified moment main term: Euler product identity both ways") {
    auto table = sieve_primes(1000000);
    SECTION("sigma0 = 1, X = 100 (paper identity at a classical point)") {
        // X = exp((log T)^{3/4}) = 100 => T = exp((log 100)^{4/3})
        const double T = std::exp(std::pow(std::log(100.0), 4.0 / 3.0));
        auto part = make_partition(T, 4, 1.0, table);
        REQUIRE(part.X == Catch::Approx(100.0).epsilon(1e-12));
        auto pred = mollified_moment_prediction(table, part);
        // route A is zeta(2) * prod_{p<100}(1 - p^{-2}); route B sums the tail primes
        REQUIRE(pred.S1_main >= 1.0);
        REQUIRE(std::fabs(pred.tail_log - (pred.tail_log_direct + pred.tail_remainder_est)) <=
                0.6 * pred.tail_remainder_est + 1e-9);
        REQUIRE(pred.tail_log == Catch::Approx(pred.tail_log_direct).margin(1e-2));
        // and S1_main agrees with exp(tail_log) by construction, both within 1e-6
        REQUIRE(std::exp(pred.tail_log) == Catch::Approx(pred.S1_main).epsilon(1e-6));
    }
    SECTION("desk partition tail_log") {
        // direct high-cutoff summation gives 0.01627 at T = 1e7, K = 4 (the
        // prime tail above X ~ 3116 is an order-1e-2 desk-scale quantity)
        auto part = make_partition(1e7, 4, std::nullopt, table);
        auto pred = mollified_moment_prediction(table, part);
        REQUIRE(pred.tail_log == Catch::Approx(0.01627).margin(8e-4));
        REQUIRE(pred.tail_log >= 0.0);
    }
    SECTION("the tail empties as X grows") {
        const double Ts[] = {1e5, 1e7};
        double prev = 1e9;
        for (double T : Ts) {
            auto part = make_partition(T, 4, 1.0, table); // sigma0 = 1 override
            auto pred = mollified_moment_prediction(table, part);
            REQUIRE(pred.S1_main < prev);
            REQUIRE(pred.S1_main >= 1.0);
            prev = pred.S1_main;
        }
    }
}

TEST_CASE("mean value of |P~_j|^2 matches the diagonal (quadrature)") {
    // single layer at T = 1e4: (1/T) int_T^{2T} |P~_1|^2 dt = sum p^{-2 sigma0}
    // up to the N log N / T error scale plus Simpson error.
    auto table = sieve_primes(1000);
    auto part = make_partition(1e4, 4, std::nullopt, table);
    const auto& layer = part.layers[1];
    double diag = 0.0, amp2 = 0.0;
    for (double w : layer.weight) {
        diag += w * w;
        amp2 += 2.0 * w * w;
    }
    const double T = 1e4;
    const int n = 400000; // step 0.025 over [T, 2T]
    const double h = T / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wgt = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
        acc += wgt * std::norm(eval_prime_poly(part, 1, T + h * i));
    }
    acc *= h / 3.0 / T;
    const double N = static_cast<double>(layer.primes.back());
    const double scale = N * std::log(N) / T * amp2;
    CAPTURE(acc, diag, scale);
    REQUIRE(std::fabs(acc - diag) <= 3.0 * scale + 1e-6);
}

TEST_CASE("moment growth bound (2k-th moments, quadrature)") {
    // (1/T) int |P~_j|^{2k} <= 3 k! (sum p^{-2 sigma0})^k for k = 1, 2, 3
    auto table = sieve_primes(1000);
    auto part = make_partition(1e4, 4, std::nullopt, table);
    double diag = 0.0;
    for (double w : part.layers[1].weight) diag += w * w;
    const double T = 1e4;
    const int n = 200000;
    const double h = T / n;
    double m2 = 0.0, m4 = 0.0, m6 = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wgt = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
        const double a2 = std::norm(eval_prime_poly(part, 1, T + h * i));
        m2 += wgt * a2;
        m4 += wgt * a2 * a2;
        m6 += wgt * a2 * a2 * a2;
    }
    m2 *= h / 3.0 / T;
    m4 *= h / 3.0 / T;
    m6 *= h / 3.0 / T;
    REQUIRE(m2 <= 3.0 * 1.0 * diag);
    REQUIRE(m4 <= 3.0 * 2.0 * diag * diag);
    REQUIRE(m6 <= 3.0 * 6.0 * diag * diag * diag);
}
