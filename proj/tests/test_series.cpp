#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ness/ldf.hpp"
#include "ness/numerics.hpp"
#include "ness/series.hpp"

using namespace ness;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

TruncatedSeries2 random_series(std::mt19937& rng, int order, cplx constant) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    TruncatedSeries2 s(order);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) s.set_coeff(i, j, {u(rng), u(rng)});
    s.set_coeff(0, 0, constant);
    return s;
}
}  // namespace

TEST_CASE("arithmetic and evaluation") {
    std::mt19937 rng(11);
    const auto a = random_series(rng, 6, {1.0, 0.2});
    const auto b = random_series(rng, 6, {0.4, -0.1});
    const cplx lam{0.01, 0.003}, nu{-0.02, 0.005};
    // Products evaluate consistently up to the truncation error O(x^7).
    const cplx lhs = (a * b).evaluate(lam, nu);
    const cplx rhs = a.evaluate(lam, nu) * b.evaluate(lam, nu);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(std::abs((a + b).evaluate(lam, nu)
                   - (a.evaluate(lam, nu) + b.evaluate(lam, nu))) < 1e-15);
}

TEST_CASE("exp and log round trip") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = random_series(rng, 8, {1.0 + 0.3 * trial, 0.1});
        CHECK(s.log().exp().max_abs_diff(s) < 1e-12);
        auto n = random_series(rng, 8, {});
        CHECK(n.exp().log().max_abs_diff(n) < 1e-12);
        // exp turns sums into products.
        const auto m = random_series(rng, 8, {});
        CHECK((n + m).exp().max_abs_diff(n.exp() * m.exp()) < 1e-12);
    }
    CHECK_THROWS(random_series(rng, 4, {}).inverse());
    CHECK_THROWS(random_series(rng, 4, {}).log());
}

TEST_CASE("inverse") {
    std::mt19937 rng(31);
    const auto s = random_series(rng, 8, {2.0, -0.4});
    const auto prod = s * s.inverse();
    CHECK(std::abs(prod.coeff(0, 0) - 1.0) < 1e-14);
    CHECK((prod - TruncatedSeries2::constant(1.0, 8)).max_abs_diff(
              TruncatedSeries2(8)) < 1e-12);
}

TEST_CASE("compose_affine substitutes exactly") {
    std::mt19937 rng(47);
    const auto s = random_series(rng, 5, {0.7, 0.0});
    const std::array<cplx, 3> a = {cplx{0.05, 0.01}, cplx{0.9, 0.0}, cplx{0.1, 0.0}};
    const std::array<cplx, 3> b = {cplx{-0.02, 0.0}, cplx{0.2, 0.1}, cplx{1.1, 0.0}};
    const auto t = s.compose_affine(a, b);
    // Polynomial identity: evaluation commutes with substitution.
    for (const cplx lam : {cplx{0.03, 0.01}, cplx{-0.05, 0.02}}) {
        const cplx nu{0.02, -0.01};
        const cplx la = a[0] + a[1] * lam + a[2] * nu;
        const cplx nb = b[0] + b[1] * lam + b[2] * nu;
        CHECK(std::abs(t.evaluate(lam, nu) - s.evaluate(la, nb)) < 1e-13);
    }
}

TEST_CASE("taylor_of_F matches full_F near the origin") {
    ThermoPoint tp{0.8, 1.7, 0.25, -0.15, 1.3};
    const auto s = taylor_of_F(tp, 12);
    for (const cplx lam : {cplx{0.02, 0.01}, cplx{-0.03, 0.0}}) {
        for (const cplx nu : {cplx{0.01, -0.02}, cplx{0.04, 0.0}}) {
            const cplx exact = full_F({lam, nu}, tp);
            CHECK(std::abs(s.evaluate(lam, nu) - exact) < 1e-14);
        }
    }
}

TEST_CASE("truncation consistency") {
    ThermoPoint tp{1.1, 2.3, 0.2, 0.1, 0.9};
    const auto s8 = taylor_of_F(tp, 8);
    const auto s4 = taylor_of_F(tp, 4);
    CHECK(s8.truncated(4).max_abs_diff(s4) < 1e-14);
}

TEST_CASE("cumulant table") {
    const double bl = 1.0, br = 2.0, c = 1.0;
    ThermoPoint tp{bl, br, 0.0, 0.0, c};
    const auto k = cumulants_from_log(taylor_of_F(tp, 8), 6);
    const double tl = 1.0 / bl, tr = 1.0 / br;
    CHECK(std::abs(k.at({1, 0}) - c * kPi / 12.0 * (tl * tl - tr * tr)) < 1e-10);
    CHECK(std::abs(k.at({2, 0}) - c * kPi / 6.0 * (tl * tl * tl + tr * tr * tr))
          < 1e-10);
    CHECK(std::abs(k.at({0, 1})) < 1e-15);
    CHECK(std::abs(k.at({0, 2}) - kPi * (tl + tr)) < 1e-10);
    // nu-cumulants of order >= 3 vanish identically: the nu dependence of
    // each chiral block is a quadratic polynomial.
    for (int n = 3; n <= 6; ++n) CHECK(std::abs(k.at({0, n})) == 0.0);

    ThermoPoint tq{1.0, 2.0, 0.3, 0.1, 1.0};
    const auto kq = cumulants_from_log(taylor_of_F(tq, 8), 4);
    CHECK(std::abs(kq.at({0, 1}) - kPi * (tq.mu_l - tq.mu_r)) < 1e-10);
    CHECK(std::abs(kq.at({0, 2}) - kPi * (tl + tr)) < 1e-10);
    CHECK(std::abs(kq.at({1, 1}) - kPi * (tq.mu_l * tl + tq.mu_r * tr)) < 1e-10);
    for (int n = 3; n <= 4; ++n) CHECK(std::abs(kq.at({0, n})) == 0.0);

    // Cross-check a second cumulant against finite differences of full_F.
    const cplx d2 = second_derivative(
        [&](double x) { return full_F({cplx{x, 0.0}, 0.0}, tq); }, 0.0, 1e-3);
    CHECK(std::abs(-d2 - kq.at({2, 0})) / std::abs(kq.at({2, 0})) < 1e-7);
}

TEST_CASE("cumulants_from_log requires a vanishing constant term") {
    std::mt19937 rng(5);
    const auto bad = random_series(rng, 4, {0.3, 0.0});
    CHECK_THROWS(cumulants_from_log(bad, 2));
}

TEST_CASE("series fluctuation relation in the counting variables") {
    // F composed with the conjugation shift equals F as a function; check
    // by evaluating the high-order series at conjugated small points.
    ThermoPoint tp{1.0, 1.15, 0.1, 0.08, 1.0};
    const auto s = taylor_of_F(tp, 24);
    const CountingPoint cp{{0.01, 0.005}, {0.02, -0.01}};
    const CountingPoint conj = fluctuation_conjugate(cp, tp);
    CHECK(std::abs(s.evaluate(cp.lambda, cp.nu) - s.evaluate(conj.lambda, conj.nu))
          < 1e-12);
}
