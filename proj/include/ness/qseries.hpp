#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "ness/thermo.hpp"

namespace ness {

// Truncated series in the nome q = e^{2 pi i tau} with an integer charge
// grading. Nome powers are rationals num/den with a fixed denominator
// dividing 24 * 4k, so the -c/24 and m^2/4k shifts are bookkept exactly.
class QSeries {
public:
    // key: (nome power numerator, charge power)
    using TermMap = std::map<std::pair<std::int64_t, int>, double>;

    QSeries(std::int64_t denominator, int truncation_order);

    std::int64_t denominator() const { return den_; }
    int truncation_order() const { return order_; }
    const TermMap& terms() const { return terms_; }

    // Adds c * q^{num/den} y^{charge}; powers beyond the truncation order
    // are dropped explicitly.
    void add_term(std::int64_t num, int charge, double c);

    QSeries operator*(const QSeries& rhs) const;

    // Sum of terms at (tau, z): coeff * e^{2 pi i tau * power} * e^{2 pi i z * charge}.
    cplx evaluate(cplx tau, cplx z) const;

    // Termwise derivative weights for the thermal log-derivatives at
    // tau = i*beta/R, z = -i*beta*mu/2: returns (value, d/dmu, d/dbeta).
    struct ThermalEval {
        double value = 0.0;
        double d_mu = 0.0;
        double d_beta = 0.0;
        double last_term_ratio = 0.0;  // |largest dropped-order term| / |value|
    };
    ThermalEval thermal_evaluate(double beta, double mu, double R) const;

private:
    std::int64_t den_;
    int order_;
    TermMap terms_;
};

// Dedekind eta as a q-series: q^{1/24} prod_{n=1..order} (1 - q^n).
QSeries eta_series(int order);

// 1/eta: q^{-1/24} times the partition generating function.
QSeries inv_eta_series(int order);

// Level-k theta function Theta_{m,k} = sum over charges l in m + 2kZ of
// q^{l^2/4k} y^l, truncated at nome power <= order.
QSeries theta_series(int level_k, int sector_m, int order);

// Rational u(1) (compact boson) character chi_m = Theta_{m,k} / eta.
// Unweighted coefficients are state degeneracies.
QSeries u1_character(int level_k, int sector_m, int order);

// Residual of the modular S transformation
//   chi_m(-1/tau, z/tau) = e^{2 pi i k z^2 / tau} / sqrt(2k)
//                          * sum_{m'} e^{-i pi m m' / k} chi_{m'}(tau, z)
// evaluated by direct series summation on both sides.
double modular_covariance_residual(int level_k, int sector_m, cplx tau, cplx z,
                                   int order);

enum class OnePointKind { charge, energy };

// Finite-size estimate of the Gibbs one-point function from the character
// log-derivative at tau = i*beta/R, z = -i*beta*mu/2. Converges to
// pi*mu (charge) and c*pi/(12 beta^2) + pi*mu^2/2 (energy) as R -> infinity.
double finite_R_one_point(double beta, double mu, double R, OnePointKind which,
                          int level_k, int order);

}  // namespace ness
