#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ness/qseries.hpp"

using namespace ness;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Partition counts by direct coin-style dynamic programming, independent of
// the pentagonal-number recurrence used by the library.
std::vector<long> partition_counts(int n_max) {
    std::vector<long> p(static_cast<size_t>(n_max) + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= n_max; ++part)
        for (int n = part; n <= n_max; ++n)
            p[static_cast<size_t>(n)] += p[static_cast<size_t>(n - part)];
    return p;
}

// Direct Fock-tower enumeration of the level-1 u(1) character: winding
// charge l in m + 2Z with weight l^2/4, oscillator tower with p(n) states.
cplx character_oracle(int sector_m, cplx tau, cplx z, int n_max) {
    const auto p = partition_counts(n_max);
    const cplx q = std::exp(2.0 * kPi * I * tau);
    const cplx y = std::exp(2.0 * kPi * I * z);
    cplx total{};
    for (int l = sector_m - 40; l <= sector_m + 40; l += 2) {
        const double h = l * l / 4.0;
        cplx tower{};
        for (int n = 0; n <= n_max; ++n)
            tower += static_cast<double>(p[static_cast<size_t>(n)])
                     * std::pow(q, n + h);
        total += tower * std::pow(y, l);
    }
    return total * std::pow(q, -1.0 / 24.0);
}
}  // namespace

TEST_CASE("eta at the self-dual point") {
    // eta(i) = Gamma(1/4) / (2 pi^{3/4})
    const double reference = 0.76822542232605666;
    const cplx v = eta_series(60).evaluate(cplx{0.0, 1.0}, 0.0);
    CHECK(std::abs(v - reference) < 1e-14);
    CHECK(std::abs(v.imag()) < 1e-16);
}

TEST_CASE("eta modular transformation") {
    // eta(-1/tau) = sqrt(-i tau) eta(tau)
    const QSeries eta = eta_series(80);
    for (const cplx tau : {cplx{0.0, 1.1}, cplx{0.0, 0.9}}) {
        const cplx lhs = eta.evaluate(-1.0 / tau, 0.0);
        const cplx rhs = std::sqrt(-I * tau) * eta.evaluate(tau, 0.0);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("euler product sparsity") {
    // Nonzero coefficients sit only at pentagonal numbers, with signs +-1.
    const QSeries eta = eta_series(200);
    int nonzero = 0;
    for (const auto& [key, coeff] : eta.terms()) {
        if (coeff == 0.0) continue;
        ++nonzero;
        CHECK(std::abs(std::abs(coeff) - 1.0) < 1e-15);
    }
    CHECK(nonzero > 10);
    CHECK(nonzero < 50);
}

TEST_CASE("partition generating function") {
    const QSeries inv = inv_eta_series(40);
    const auto p = partition_counts(40);
    for (int n : {5, 10, 20, 30, 40}) {
        // coefficient of q^{n - 1/24}
        const auto it = inv.terms().find({24L * n - 1, 0});
        REQUIRE(it != inv.terms().end());
        CHECK(it->second == doctest::Approx(static_cast<double>(
                                p[static_cast<size_t>(n)])).epsilon(1e-12));
    }
}

TEST_CASE("character degeneracies are nonnegative integers") {
    for (int m : {0, 1}) {
        const QSeries chi = u1_character(1, m, 150);
        for (const auto& [key, coeff] : chi.terms()) {
            CHECK(coeff > -1e-9);
            CHECK(std::abs(coeff - std::round(coeff)) < 1e-6);
        }
    }
}

TEST_CASE("character against direct Fock enumeration") {
    const cplx tau{0.0, 2.0};
    for (int m : {0, 1}) {
        for (const cplx z : {cplx{0.0, 0.0}, cplx{0.1, 0.0}, cplx{0.05, -0.1}}) {
            const cplx lib = u1_character(1, m, 30).evaluate(tau, z);
            const cplx oracle = character_oracle(m, tau, z, 30);
            CHECK(std::abs(lib - oracle) < 1e-14);
        }
    }
}

TEST_CASE("modular covariance of u(1) characters") {
    for (int k : {1, 2}) {
        for (int m = 0; m < 2 * k; ++m) {
            for (const cplx tau : {cplx{0.0, 0.8}, cplx{0.0, 1.0}, cplx{0.0, 1.2}}) {
                const double res =
                    modular_covariance_residual(k, m, tau, cplx{0.1, 0.05}, 60);
                CHECK(res < 1e-12);
            }
        }
    }
}

TEST_CASE("thermal evaluation derivatives match finite differences") {
    const QSeries chi = u1_character(1, 0, 200);
    const double beta = 1.0, mu = 0.2, big_r = 10.0;
    const auto eval = chi.thermal_evaluate(beta, mu, big_r);
    const double h = 1e-6;
    auto value = [&](double b, double m) {
        return chi.thermal_evaluate(b, m, big_r).value;
    };
    const double d_mu_fd = (value(beta, mu + h) - value(beta, mu - h)) / (2 * h);
    const double d_beta_fd = (value(beta + h, mu) - value(beta - h, mu)) / (2 * h);
    CHECK(std::abs(eval.d_mu - d_mu_fd) / std::abs(d_mu_fd) < 1e-8);
    CHECK(std::abs(eval.d_beta - d_beta_fd) / std::abs(d_beta_fd) < 1e-8);
}

TEST_CASE("one-point estimates converge monotonically in R") {
    const double beta = 1.0, mu = 0.25;
    const double target_q = kPi * mu;
    const double target_e = kPi / 12.0 + kPi * mu * mu / 2.0;
    double prev_q = 1e300, prev_e = 1e300;
    for (double r : {10.0, 20.0, 40.0, 80.0}) {
        const int order = static_cast<int>(40.0 * r);
        const double q_err = std::abs(
            finite_R_one_point(beta, mu, r, OnePointKind::charge, 1, order)
            - target_q);
        const double e_err = std::abs(
            finite_R_one_point(beta, mu, r, OnePointKind::energy, 1, order)
            - target_e);
        // Monotone until the rounding-noise floor of the large-order sums.
        const double floor = 1e-9;
        CHECK(std::max(q_err, floor) <= std::max(prev_q, floor));
        CHECK(std::max(e_err, floor) <= std::max(prev_e, floor));
        prev_q = q_err;
        prev_e = e_err;
    }
    CHECK(prev_q / target_q < 2e-2);
    CHECK(prev_e / target_e < 2e-2);
}

TEST_CASE("truncation guard rejects underresolved evaluations") {
    CHECK_THROWS_AS(
        (void)finite_R_one_point(1.0, 0.0, 80.0, OnePointKind::energy, 1, 120),
        std::runtime_error);
}
