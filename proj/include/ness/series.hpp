#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "ness/thermo.hpp"

namespace ness {

// Truncated bivariate power series over complex coefficients, stored
// densely on the simplex of total degree <= order. Variable 0 is the
// energy counting field lambda, variable 1 the charge counting field nu.
class TruncatedSeries2 {
public:
    explicit TruncatedSeries2(int order = 8);

    static TruncatedSeries2 constant(cplx value, int order = 8);
    // The monomial lambda^i nu^j.
    static TruncatedSeries2 monomial(int i, int j, cplx coeff, int order = 8);

    int order() const { return order_; }
    cplx coeff(int i, int j) const;
    void set_coeff(int i, int j, cplx value);

    TruncatedSeries2 truncated(int new_order) const;

    TruncatedSeries2 operator+(const TruncatedSeries2& rhs) const;
    TruncatedSeries2 operator-(const TruncatedSeries2& rhs) const;
    TruncatedSeries2 operator*(const TruncatedSeries2& rhs) const;
    TruncatedSeries2 operator*(cplx scalar) const;
    TruncatedSeries2& operator+=(const TruncatedSeries2& rhs);

    // Requires a nonzero constant term.
    TruncatedSeries2 inverse() const;
    TruncatedSeries2 exp() const;
    // Requires a nonzero constant term.
    TruncatedSeries2 log() const;

    // Substitutes affine expressions for the two variables:
    // lambda -> a0 + a1*lambda + a2*nu, nu -> b0 + b1*lambda + b2*nu.
    TruncatedSeries2 compose_affine(const std::array<cplx, 3>& a,
                                    const std::array<cplx, 3>& b) const;

    cplx evaluate(cplx lambda, cplx nu) const;

    double max_abs_diff(const TruncatedSeries2& rhs) const;

private:
    int index(int i, int j) const;
    int order_;
    std::vector<cplx> coeffs_;  // simplex, lexicographic in (i, j), i + j <= order
};

// Taylor series of full_F(lambda, nu; tp) around the origin, built from the
// closed-form blocks (geometric series in i*lambda/beta, polynomial in nu).
TruncatedSeries2 taylor_of_F(const ThermoPoint& tp, int order = 8);

// Cumulant rates kappa_{m,n} = m! n! [lambda^m nu^n] S / i^{m+n} for a
// log-generating function S (constant term must vanish). Entries are
// returned for all 1 <= m + n <= n_max.
std::map<std::pair<int, int>, cplx> cumulants_from_log(const TruncatedSeries2& s,
                                                       int n_max);

}  // namespace ness
