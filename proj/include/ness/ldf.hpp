#pragma once

#include <utility>
#include <vector>

#include "ness/thermo.hpp"

namespace ness {

// Closed-form steady-state quantities: chiral and full large-deviation
// functions, one-point functions at complex-shifted parameters, mean
// currents, the fluctuation-relation shift, the c* reduction, and the
// alternate two-time-in-steady-state asymptote.

// Pole-exclusion margin for beta - i*lambda = 0.
inline constexpr double kPoleMargin = 1e-9;

// Chiral cumulant generating rate f(lambda, nu; beta, mu) for a unitary
// theory with central charge c. Requires Re(beta - i*lambda) > 0.
cplx chiral_f(cplx lambda, cplx nu, double beta, double mu, double c);

// F(lambda, nu) = f(lambda, nu; beta_l, mu_l) + f(-lambda, -nu; beta_r, mu_r).
cplx full_F(const CountingPoint& cp, const ThermoPoint& tp);

// Energy-only generating rate, the mu = nu = 0 reduction of full_F.
cplx f_energy_only(cplx lambda, double c, double beta_l, double beta_r);

struct Currents {
    double energy = 0.0;
    double charge = 0.0;
};

// Mean steady currents (J_E, J_Q).
Currents mean_currents(const ThermoPoint& tp);

// Thermal one-point functions of the chiral energy density and u(1)
// current, analytically continued to complex beta and mu.
cplx one_point_h(cplx beta, cplx mu, double c);
cplx one_point_j(cplx beta, cplx mu);

// The counting point conjugate under the fluctuation relation; an involution.
CountingPoint fluctuation_conjugate(const CountingPoint& cp, const ThermoPoint& tp);

struct CStarResult {
    double c_star = 0.0;
    double residual = 0.0;  // max |F(lambda,0) - F_energy_only(lambda; c*)| on a grid
};

// On the constraint surface beta_l*mu_l == beta_r*mu_r =: chi, F(lambda, 0)
// equals the energy-only formula with c* = c + 6 chi^2. Throws if the
// constraint is violated beyond `constraint_tol`.
CStarResult c_star_reduction(const ThermoPoint& tp, double constraint_tol = 1e-10);

enum class Reservoir { left, right, tie };

struct AltTwoTimeResult {
    double value = 0.0;
    Reservoir dominant = Reservoir::tie;
    double gap = 0.0;  // difference between the two candidate rates
};

// Large-deviation asymptote of the two-time protocol whose first
// measurement is taken in the steady state: the larger of the two
// single-reservoir rates f(lambda;beta) + f(-lambda;beta), beta in
// {beta_l, beta_r}. Real lambda only.
AltTwoTimeResult alt_two_time_F(double lambda, const ThermoPoint& tp);

// Display-only conversion of natural-unit currents to SI-like units.
struct SICurrents {
    double energy_watts = 0.0;
    double charge_amperes = 0.0;
};
SICurrents to_si(const Currents& natural);

}  // namespace ness
