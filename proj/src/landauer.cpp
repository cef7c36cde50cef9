#include "ness/landauer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ness/quadrature.hpp"
#include "ness/series.hpp"

namespace ness {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Overflow-safe Fermi factor.
double fermi(double eps, double beta, double mu) {
    const double x = beta * (eps - mu);
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

// Panel edges for the k-integrals: the Fermi points of either reservoir,
// where the integrand develops a step at low temperature. Splitting there
// keeps the adaptive refinement from missing a narrow conducting window.
std::vector<double> panel_edges(const BandSpec& spec, const ReservoirPair& rp) {
    std::vector<double> edges{0.0};
    for (const double mu : {rp.mu_l, rp.mu_r})
        if (std::abs(mu) < spec.hopping)
            edges.push_back(std::acos(-mu / spec.hopping));
    edges.push_back(kPi);
    std::sort(edges.begin(), edges.end());
    return edges;
}

template <typename F>
auto integrate_panels(const F& f, const std::vector<double>& edges, double abs_tol,
                      double rel_tol) {
    auto total = integrate_gk(f, edges[0], edges[1], abs_tol, rel_tol);
    for (size_t i = 1; i + 1 < edges.size(); ++i)
        total += integrate_gk(f, edges[i], edges[i + 1], abs_tol, rel_tol);
    return total;
}

template <typename F>
double integrate_panels_real(const F& f, const std::vector<double>& edges,
                             double abs_tol, double rel_tol) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        total += integrate_gk_real(f, edges[i], edges[i + 1], abs_tol, rel_tol);
    return total;
}

}  // namespace

double BandSpec::dispersion(double k) const { return -hopping * std::cos(k); }
double BandSpec::velocity(double k) const { return hopping * std::sin(k); }

Currents steady_currents(const BandSpec& spec, const ReservoirPair& rp) {
    const auto edges = panel_edges(spec, rp);
    auto current = [&](bool energy_weight) {
        return integrate_panels_real(
            [&](double k) {
                const double eps = spec.dispersion(k);
                const double df = fermi(eps, rp.beta_l, rp.mu_l)
                                - fermi(eps, rp.beta_r, rp.mu_r);
                const double w = energy_weight ? eps : 1.0;
                return spec.velocity(k) * w * df / (2.0 * kPi);
            },
            edges, 1e-14, 1e-12);
    };
    Currents out;
    out.energy = current(true);
    out.charge = current(false);
    return out;
}

cplx fcs_rate(const BandSpec& spec, const ReservoirPair& rp, cplx counting_field,
              TransferKind which) {
    auto integrand = [&](double k) {
        const double eps = spec.dispersion(k);
        const double fl = fermi(eps, rp.beta_l, rp.mu_l);
        const double fr = fermi(eps, rp.beta_r, rp.mu_r);
        const cplx theta = which == TransferKind::charge ? counting_field
                                                         : counting_field * eps;
        const cplx w = 1.0 + fl * (1.0 - fr) * (std::exp(I * theta) - 1.0)
                     + fr * (1.0 - fl) * (std::exp(-I * theta) - 1.0);
        if (w.real() <= 0.0) {
            std::ostringstream msg;
            msg << "fcs_rate: log left the principal sheet at k = " << k
                << " (argument " << w << "); reduce the counting field";
            throw std::domain_error(msg.str());
        }
        return spec.velocity(k) * std::log(w) / (2.0 * kPi);
    };
    return integrate_panels(integrand, panel_edges(spec, rp), 1e-13, 1e-11);
}

std::vector<double> fcs_cumulants(const BandSpec& spec, const ReservoirPair& rp,
                                  TransferKind which, int n_max) {
    if (n_max < 1 || n_max > 8)
        throw std::invalid_argument("fcs_cumulants: n_max must be in [1, 8]");
    const auto edges = panel_edges(spec, rp);
    std::vector<double> out;
    for (int n = 1; n <= n_max; ++n) {
        double fact = 1.0;
        for (int m = 2; m <= n; ++m) fact *= m;
        out.push_back(fact
                      * integrate_panels_real(
                            [&](double k) {
                                const double eps = spec.dispersion(k);
                                const double fl = fermi(eps, rp.beta_l, rp.mu_l);
                                const double fr = fermi(eps, rp.beta_r, rp.mu_r);
                                // Per-mode log-generating function in x = i*theta_k.
                                TruncatedSeries2 ex =
                                    TruncatedSeries2::monomial(1, 0, 1.0, n);
                                TruncatedSeries2 m_of_x =
                                    TruncatedSeries2::constant(1.0, n)
                                    + (ex.exp() - TruncatedSeries2::constant(1.0, n))
                                          * (fl * (1.0 - fr))
                                    + ((ex * cplx{-1.0, 0.0}).exp()
                                       - TruncatedSeries2::constant(1.0, n))
                                          * (fr * (1.0 - fl));
                                double kappa = m_of_x.log().coeff(n, 0).real();
                                const double w = which == TransferKind::energy
                                                     ? std::pow(eps, n)
                                                     : 1.0;
                                return spec.velocity(k) * w * kappa / (2.0 * kPi);
                            },
                            edges, 1e-14, 1e-11));
    }
    return out;
}

ChargeCalibration calibrate_charge_scale(const BandSpec& spec, double beta_ref,
                                         double mu_ref) {
    ReservoirPair eq{beta_ref, mu_ref, beta_ref, mu_ref};
    const double c2_lat = fcs_cumulants(spec, eq, TransferKind::charge, 2)[1];
    const double c2_cft = 2.0 * kPi / beta_ref;
    ChargeCalibration cal;
    cal.counting_scale = std::sqrt(c2_cft / c2_lat);

    const double delta = 0.01;
    ReservoirPair biased{beta_ref, mu_ref + delta, beta_ref, mu_ref - delta};
    const double c1_lat = fcs_cumulants(spec, biased, TransferKind::charge, 1)[0];
    cal.mu_scale = cal.counting_scale * c1_lat / (2.0 * kPi * delta);
    return cal;
}

}  // namespace ness
