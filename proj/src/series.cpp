#include "ness/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ness {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
}  // namespace

TruncatedSeries2::TruncatedSeries2(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("TruncatedSeries2: negative order");
    coeffs_.assign(static_cast<size_t>((order + 1) * (order + 2) / 2), cplx{});
}

int TruncatedSeries2::index(int i, int j) const {
    // Row i holds degrees j = 0 .. order - i.
    return i * (order_ + 1) - i * (i - 1) / 2 + j;
}

TruncatedSeries2 TruncatedSeries2::constant(cplx value, int order) {
    TruncatedSeries2 s(order);
    s.coeffs_[0] = value;
    return s;
}

TruncatedSeries2 TruncatedSeries2::monomial(int i, int j, cplx coeff, int order) {
    TruncatedSeries2 s(order);
    s.set_coeff(i, j, coeff);
    return s;
}

cplx TruncatedSeries2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_) return cplx{};
    return coeffs_[static_cast<size_t>(index(i, j))];
}

void TruncatedSeries2::set_coeff(int i, int j, cplx value) {
    if (i < 0 || j < 0 || i + j > order_)
        throw std::out_of_range("TruncatedSeries2::set_coeff: degree beyond order");
    coeffs_[static_cast<size_t>(index(i, j))] = value;
}

TruncatedSeries2 TruncatedSeries2::truncated(int new_order) const {
    TruncatedSeries2 out(new_order);
    for (int i = 0; i <= new_order; ++i)
        for (int j = 0; i + j <= new_order; ++j)
            out.set_coeff(i, j, coeff(i, j));
    return out;
}

TruncatedSeries2 TruncatedSeries2::operator+(const TruncatedSeries2& rhs) const {
    TruncatedSeries2 out(*this);
    out += rhs;
    return out;
}

TruncatedSeries2& TruncatedSeries2::operator+=(const TruncatedSeries2& rhs) {
    if (rhs.order_ != order_)
        throw std::invalid_argument("TruncatedSeries2: order mismatch");
    for (size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    return *this;
}

TruncatedSeries2 TruncatedSeries2::operator-(const TruncatedSeries2& rhs) const {
    return *this + rhs * cplx{-1.0, 0.0};
}

TruncatedSeries2 TruncatedSeries2::operator*(cplx scalar) const {
    TruncatedSeries2 out(*this);
    for (auto& c : out.coeffs_) c *= scalar;
    return out;
}

TruncatedSeries2 TruncatedSeries2::operator*(const TruncatedSeries2& rhs) const {
    if (rhs.order_ != order_)
        throw std::invalid_argument("TruncatedSeries2: order mismatch");
    TruncatedSeries2 out(order_);
    for (int i1 = 0; i1 <= order_; ++i1)
        for (int j1 = 0; i1 + j1 <= order_; ++j1) {
            const cplx a = coeff(i1, j1);
            if (a == cplx{}) continue;
            for (int i2 = 0; i1 + j1 + i2 <= order_; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= order_; ++j2) {
                    const cplx b = rhs.coeff(i2, j2);
                    if (b == cplx{}) continue;
                    out.coeffs_[static_cast<size_t>(out.index(i1 + i2, j1 + j2))] += a * b;
                }
        }
    return out;
}

TruncatedSeries2 TruncatedSeries2::inverse() const {
    const cplx c0 = coeff(0, 0);
    if (c0 == cplx{})
        throw std::domain_error("TruncatedSeries2::inverse: zero constant term");
    // 1/(c0 + N) = (1/c0) sum (-N/c0)^m, N nilpotent in the truncated ring.
    TruncatedSeries2 n = *this;
    n.set_coeff(0, 0, cplx{});
    n = n * (-1.0 / c0);
    TruncatedSeries2 out = constant(1.0, order_);
    TruncatedSeries2 pw = constant(1.0, order_);
    for (int m = 1; m <= order_; ++m) {
        pw = pw * n;
        out += pw;
    }
    return out * (1.0 / c0);
}

TruncatedSeries2 TruncatedSeries2::exp() const {
    const cplx c0 = coeff(0, 0);
    TruncatedSeries2 n = *this;
    n.set_coeff(0, 0, cplx{});
    TruncatedSeries2 out = constant(1.0, order_);
    TruncatedSeries2 pw = constant(1.0, order_);
    double fact = 1.0;
    for (int m = 1; m <= order_; ++m) {
        pw = pw * n;
        fact *= m;
        out += pw * (1.0 / fact);
    }
    return out * std::exp(c0);
}

TruncatedSeries2 TruncatedSeries2::log() const {
    const cplx c0 = coeff(0, 0);
    if (c0 == cplx{})
        throw std::domain_error("TruncatedSeries2::log: zero constant term");
    TruncatedSeries2 n = *this;
    n.set_coeff(0, 0, cplx{});
    n = n * (1.0 / c0);
    TruncatedSeries2 out = constant(std::log(c0), order_);
    TruncatedSeries2 pw = constant(1.0, order_);
    double sign = 1.0;
    for (int m = 1; m <= order_; ++m) {
        pw = pw * n;
        out += pw * (sign / m);
        sign = -sign;
    }
    return out;
}

TruncatedSeries2 TruncatedSeries2::compose_affine(const std::array<cplx, 3>& a,
                                                  const std::array<cplx, 3>& b) const {
    TruncatedSeries2 sub_l = constant(a[0], order_);
    sub_l.set_coeff(1, 0, a[1]);
    sub_l.set_coeff(0, 1, a[2]);
    TruncatedSeries2 sub_n = constant(b[0], order_);
    sub_n.set_coeff(1, 0, b[1]);
    sub_n.set_coeff(0, 1, b[2]);

    // Precompute powers of the substituted variables.
    std::vector<TruncatedSeries2> pl{constant(1.0, order_)};
    std::vector<TruncatedSeries2> pn{constant(1.0, order_)};
    for (int m = 1; m <= order_; ++m) {
        pl.push_back(pl.back() * sub_l);
        pn.push_back(pn.back() * sub_n);
    }
    TruncatedSeries2 out(order_);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) {
            const cplx c = coeff(i, j);
            if (c == cplx{}) continue;
            out += (pl[static_cast<size_t>(i)] * pn[static_cast<size_t>(j)]) * c;
        }
    return out;
}

cplx TruncatedSeries2::evaluate(cplx lambda, cplx nu) const {
    cplx out{};
    for (int i = order_; i >= 0; --i) {
        cplx row{};
        for (int j = order_ - i; j >= 0; --j) row = row * nu + coeff(i, j);
        out = out * lambda + row;
    }
    return out;
}

double TruncatedSeries2::max_abs_diff(const TruncatedSeries2& rhs) const {
    double worst = 0.0;
    const int o = std::max(order_, rhs.order_);
    for (int i = 0; i <= o; ++i)
        for (int j = 0; i + j <= o; ++j)
            worst = std::max(worst, std::abs(coeff(i, j) - rhs.coeff(i, j)));
    return worst;
}

namespace {

// Series of 1/(beta - i*lambda) around lambda = 0.
TruncatedSeries2 inv_shifted_beta(double beta, int order) {
    TruncatedSeries2 out(order);
    cplx term = 1.0 / beta;
    for (int m = 0; m <= order; ++m) {
        out.set_coeff(m, 0, term);
        term *= I / beta;
    }
    return out;
}

// Taylor series of the chiral rate f(s*lambda, s*nu; beta, mu) with
// sign s = +1 (left) or -1 (right).
TruncatedSeries2 chiral_f_series(double sign, double beta, double mu, double c,
                                 int order) {
    const TruncatedSeries2 inv = inv_shifted_beta(beta, order)
                                     .compose_affine({0.0, sign, 0.0}, {0.0, 0.0, 1.0});
    TruncatedSeries2 bm = TruncatedSeries2::constant(beta * mu, order);
    bm.set_coeff(0, 1, sign * I);
    const TruncatedSeries2 quad = bm * bm;
    TruncatedSeries2 out = (inv - TruncatedSeries2::constant(1.0 / beta, order))
                               * (c * kPi / 12.0);
    out += (quad * inv) * (kPi / 2.0);
    out += TruncatedSeries2::constant(-kPi * beta * mu * mu / 2.0, order);
    return out;
}

}  // namespace

TruncatedSeries2 taylor_of_F(const ThermoPoint& tp, int order) {
    tp.validate();
    if (order < 1) throw std::invalid_argument("taylor_of_F: order must be >= 1");
    return chiral_f_series(+1.0, tp.beta_l, tp.mu_l, tp.c, order)
         + chiral_f_series(-1.0, tp.beta_r, tp.mu_r, tp.c, order);
}

std::map<std::pair<int, int>, cplx> cumulants_from_log(const TruncatedSeries2& s,
                                                       int n_max) {
    if (s.coeff(0, 0) != cplx{})
        throw std::domain_error(
            "cumulants_from_log: nonzero constant term; not a log-generating function");
    std::map<std::pair<int, int>, cplx> out;
    double fact_i = 1.0;
    for (int i = 0; i <= std::min(n_max, s.order()); ++i) {
        if (i > 0) fact_i *= i;
        double fact_j = 1.0;
        for (int j = 0; i + j <= std::min(n_max, s.order()); ++j) {
            if (j > 0) fact_j *= j;
            if (i + j == 0) continue;
            out[{i, j}] = s.coeff(i, j) * fact_i * fact_j / std::pow(I, i + j);
        }
    }
    return out;
}

}  // namespace ness
