#include "ness/qseries.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ness {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
}  // namespace

QSeries::QSeries(std::int64_t denominator, int truncation_order)
    : den_(denominator), order_(truncation_order) {
    if (denominator <= 0) throw std::invalid_argument("QSeries: denominator must be positive");
    if (truncation_order < 0) throw std::invalid_argument("QSeries: negative truncation order");
}

void QSeries::add_term(std::int64_t num, int charge, double c) {
    if (num > order_ * den_) return;
    auto& slot = terms_[{num, charge}];
    slot += c;
    if (slot == 0.0) terms_.erase({num, charge});
}

QSeries QSeries::operator*(const QSeries& rhs) const {
    const std::int64_t L = std::lcm(den_, rhs.den_);
    const std::int64_t sa = L / den_;
    const std::int64_t sb = L / rhs.den_;
    QSeries out(L, std::min(order_, rhs.order_));
    const std::int64_t cap = static_cast<std::int64_t>(out.order_) * L;
    for (const auto& [ka, ca] : terms_) {
        const std::int64_t na = ka.first * sa;
        if (na > cap) continue;
        for (const auto& [kb, cb] : rhs.terms_) {
            const std::int64_t n = na + kb.first * sb;
            if (n > cap) break;  // rhs map is ordered by nome power first
            out.terms_[{n, ka.second + kb.second}] += ca * cb;
        }
    }
    return out;
}

cplx QSeries::evaluate(cplx tau, cplx z) const {
    cplx sum{};
    const cplx wq = 2.0 * kPi * I * tau / static_cast<double>(den_);
    const cplx wz = 2.0 * kPi * I * z;
    for (const auto& [key, c] : terms_)
        sum += c * std::exp(wq * static_cast<double>(key.first)
                            + wz * static_cast<double>(key.second));
    return sum;
}

QSeries::ThermalEval QSeries::thermal_evaluate(double beta, double mu, double R) const {
    // tau = i beta / R, z = -i beta mu / 2: every term is real.
    ThermalEval out;
    double last_band = 0.0;
    const std::int64_t band_lo = static_cast<std::int64_t>(order_ - 1) * den_;
    for (const auto& [key, c] : terms_) {
        const double p = static_cast<double>(key.first) / static_cast<double>(den_);
        const double l = static_cast<double>(key.second);
        const double term = c * std::exp(-2.0 * kPi * beta * p / R + kPi * beta * mu * l);
        out.value += term;
        out.d_mu += term * kPi * beta * l;
        out.d_beta += term * (-2.0 * kPi * p / R + kPi * mu * l);
        if (key.first >= band_lo) last_band = std::max(last_band, std::abs(term));
    }
    out.last_term_ratio = std::abs(out.value) > 0.0 ? last_band / std::abs(out.value) : 1.0;
    return out;
}

namespace {

// Coefficients of prod_{n=1..order} (1 - q^n) up to q^order.
std::vector<double> euler_product(int order) {
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    c[0] = 1.0;
    for (int n = 1; n <= order; ++n)
        for (int i = order - n; i >= 0; --i)
            c[static_cast<size_t>(i + n)] -= c[static_cast<size_t>(i)];
    return c;
}

// Partition numbers p(0..order) via the pentagonal recurrence.
std::vector<double> partition_numbers(int order) {
    std::vector<double> p(static_cast<size_t>(order) + 1, 0.0);
    p[0] = 1.0;
    for (int n = 1; n <= order; ++n) {
        double acc = 0.0;
        for (int j = 1;; ++j) {
            const int g1 = j * (3 * j - 1) / 2;
            const int g2 = j * (3 * j + 1) / 2;
            if (g1 > n) break;
            const double sign = (j % 2 == 1) ? 1.0 : -1.0;
            acc += sign * p[static_cast<size_t>(n - g1)];
            if (g2 <= n) acc += sign * p[static_cast<size_t>(n - g2)];
        }
        p[static_cast<size_t>(n)] = acc;
    }
    return p;
}

}  // namespace

QSeries eta_series(int order) {
    if (order < 0) throw std::invalid_argument("eta_series: negative order");
    QSeries out(24, order);
    const auto prod = euler_product(order);
    for (int n = 0; n <= order; ++n)
        if (prod[static_cast<size_t>(n)] != 0.0)
            out.add_term(24LL * n + 1, 0, prod[static_cast<size_t>(n)]);
    return out;
}

QSeries inv_eta_series(int order) {
    QSeries out(24, order);
    const auto p = partition_numbers(order);
    for (int n = 0; n <= order; ++n)
        out.add_term(24LL * n - 1, 0, p[static_cast<size_t>(n)]);
    return out;
}

QSeries theta_series(int level_k, int sector_m, int order) {
    if (level_k < 1) throw std::invalid_argument("theta_series: level must be >= 1");
    if (sector_m < 0 || sector_m >= 2 * level_k)
        throw std::invalid_argument("theta_series: sector index out of range [0, 2k)");
    const std::int64_t den = 4LL * level_k;
    QSeries out(den, order);
    const std::int64_t cap = static_cast<std::int64_t>(order) * den;
    for (std::int64_t l = sector_m; l * l <= cap; l += 2 * level_k)
        out.add_term(l * l, static_cast<int>(l), 1.0);
    for (std::int64_t l = sector_m - 2LL * level_k; l * l <= cap; l -= 2 * level_k)
        out.add_term(l * l, static_cast<int>(l), 1.0);
    return out;
}

QSeries u1_character(int level_k, int sector_m, int order) {
    return theta_series(level_k, sector_m, order) * inv_eta_series(order);
}

double modular_covariance_residual(int level_k, int sector_m, cplx tau, cplx z,
                                   int order) {
    const cplx lhs = u1_character(level_k, sector_m, order).evaluate(-1.0 / tau, z / tau);
    cplx sum{};
    for (int mp = 0; mp < 2 * level_k; ++mp) {
        const cplx s = std::exp(-I * kPi * static_cast<double>(sector_m * mp)
                                / static_cast<double>(level_k));
        sum += s * u1_character(level_k, mp, order).evaluate(tau, z);
    }
    const cplx rhs = std::exp(2.0 * kPi * I * static_cast<double>(level_k) * z * z / tau)
                   / std::sqrt(2.0 * level_k) * sum;
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double finite_R_one_point(double beta, double mu, double R, OnePointKind which,
                          int level_k, int order) {
    if (beta <= 0.0 || R <= 0.0)
        throw std::domain_error("finite_R_one_point: beta and R must be positive");
    const QSeries chi = u1_character(level_k, 0, order);
    const auto ev = chi.thermal_evaluate(beta, mu, R);
    if (ev.last_term_ratio > 1e-14) {
        std::ostringstream msg;
        msg << "finite_R_one_point: truncation insufficient (tail ratio "
            << ev.last_term_ratio << " > 1e-14); increase order above " << order
            << " or reduce R/beta below " << R / beta;
        throw std::runtime_error(msg.str());
    }
    const double charge_est = ev.d_mu / ev.value / (beta * R);
    if (which == OnePointKind::charge) return charge_est;
    return -ev.d_beta / ev.value / R + mu * charge_est;
}

}  // namespace ness
