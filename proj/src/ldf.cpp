#include "ness/ldf.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ness {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

void check_pole(cplx shifted_beta, double beta, const char* side) {
    if (shifted_beta.real() <= 0.0 || std::abs(shifted_beta) < kPoleMargin) {
        std::ostringstream msg;
        msg << "chiral_f" << side << ": Re(beta - i*lambda) = " << shifted_beta.real()
            << " violates the pole domain (pole at lambda = -i*beta = -" << beta << "i)";
        throw std::domain_error(msg.str());
    }
}

}  // namespace

cplx chiral_f(cplx lambda, cplx nu, double beta, double mu, double c) {
    const cplx sb = beta - I * lambda;
    check_pole(sb, beta, "");
    return c * kPi / 12.0 * (1.0 / sb - 1.0 / beta)
         + kPi * (beta * mu + I * nu) * (beta * mu + I * nu) / (2.0 * sb)
         - kPi * beta * mu * mu / 2.0;
}

cplx full_F(const CountingPoint& cp, const ThermoPoint& tp) {
    tp.validate();
    check_pole(tp.beta_l - I * cp.lambda, tp.beta_l, " (left)");
    check_pole(tp.beta_r + I * cp.lambda, tp.beta_r, " (right)");
    return chiral_f(cp.lambda, cp.nu, tp.beta_l, tp.mu_l, tp.c)
         + chiral_f(-cp.lambda, -cp.nu, tp.beta_r, tp.mu_r, tp.c);
}

cplx f_energy_only(cplx lambda, double c, double beta_l, double beta_r) {
    const cplx sl = beta_l - I * lambda;
    const cplx sr = beta_r + I * lambda;
    check_pole(sl, beta_l, " (left)");
    check_pole(sr, beta_r, " (right)");
    return c * kPi / 12.0
         * (I * lambda / (beta_l * sl) - I * lambda / (beta_r * sr));
}

Currents mean_currents(const ThermoPoint& tp) {
    tp.validate();
    const double tl = tp.temperature_l();
    const double tr = tp.temperature_r();
    Currents out;
    out.energy = tp.c * kPi / 12.0 * (tl * tl - tr * tr)
               + kPi / 2.0 * (tp.mu_l * tp.mu_l - tp.mu_r * tp.mu_r);
    out.charge = kPi * (tp.mu_l - tp.mu_r);
    return out;
}

cplx one_point_h(cplx beta, cplx mu, double c) {
    if (beta.real() <= 0.0)
        throw std::domain_error("one_point_h: Re(beta) must be positive");
    return c * kPi / (12.0 * beta * beta) + kPi * mu * mu / 2.0;
}

cplx one_point_j(cplx beta, cplx mu) {
    if (beta.real() <= 0.0)
        throw std::domain_error("one_point_j: Re(beta) must be positive");
    return kPi * mu;
}

CountingPoint fluctuation_conjugate(const CountingPoint& cp, const ThermoPoint& tp) {
    tp.validate();
    CountingPoint out;
    out.lambda = I * (tp.beta_r - tp.beta_l) - cp.lambda;
    out.nu = I * (tp.beta_l * tp.mu_l - tp.beta_r * tp.mu_r) - cp.nu;
    return out;
}

CStarResult c_star_reduction(const ThermoPoint& tp, double constraint_tol) {
    tp.validate();
    const double chi_l = tp.beta_l * tp.mu_l;
    const double chi_r = tp.beta_r * tp.mu_r;
    if (std::abs(chi_l - chi_r) > constraint_tol) {
        std::ostringstream msg;
        msg << "c_star_reduction: beta_l*mu_l = " << chi_l << " and beta_r*mu_r = "
            << chi_r << " differ; the reduction holds only on the constraint surface";
        throw std::domain_error(msg.str());
    }
    const double chi = chi_l;
    CStarResult out;
    // The mu blocks of f collapse to (pi chi^2 / 2)(1/(beta - i lambda) - 1/beta),
    // i.e. a central-charge shift of 12 * chi^2 / 2 = 6 chi^2.
    out.c_star = tp.c + 6.0 * chi * chi;
    // Residual over a real lambda grid well inside both pole domains.
    const double lmax = 0.8 * std::min(tp.beta_l, tp.beta_r);
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double lam = -lmax + 2.0 * lmax * i / 40.0;
        const cplx lhs = full_F({lam, 0.0}, tp);
        const cplx rhs = f_energy_only(lam, out.c_star, tp.beta_l, tp.beta_r);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    out.residual = worst;
    return out;
}

AltTwoTimeResult alt_two_time_F(double lambda, const ThermoPoint& tp) {
    tp.validate();
    auto rate = [&](double beta) {
        return (chiral_f(lambda, 0.0, beta, 0.0, tp.c)
                + chiral_f(-lambda, 0.0, beta, 0.0, tp.c)).real();
    };
    const double rl = rate(tp.beta_l);
    const double rr = rate(tp.beta_r);
    AltTwoTimeResult out;
    out.value = std::max(rl, rr);
    out.gap = rl - rr;
    if (std::abs(out.gap) < 1e-15)
        out.dominant = Reservoir::tie;
    else
        out.dominant = rl > rr ? Reservoir::left : Reservoir::right;
    return out;
}

SICurrents to_si(const Currents& natural) {
    // J_E carries hbar^-1 k_B^2 T^2 and J_Q carries hbar^-1 in the closed
    // forms; with T in kelvin and mu in joules this restores watts/amperes.
    constexpr double hbar = 1.054571817e-34;   // J s
    constexpr double kb = 1.380649e-23;        // J/K
    constexpr double e_charge = 1.602176634e-19;
    SICurrents out;
    out.energy_watts = natural.energy * kb * kb / hbar;
    out.charge_amperes = natural.charge * e_charge / hbar;
    return out;
}

}  // namespace ness
