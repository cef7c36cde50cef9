#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ness {

using cplx = std::complex<double>;

// External parameters of the two-reservoir setup, natural units
// (hbar = k_B = v = 1). Counting fields are passed separately.
struct ThermoPoint {
    double beta_l = 1.0;
    double beta_r = 1.0;
    double mu_l = 0.0;
    double mu_r = 0.0;
    double c = 1.0;

    void validate() const {
        if (!(beta_l > 0.0) || !std::isfinite(beta_l))
            throw std::domain_error("ThermoPoint: beta_l must be positive and finite");
        if (!(beta_r > 0.0) || !std::isfinite(beta_r))
            throw std::domain_error("ThermoPoint: beta_r must be positive and finite");
        if (!(c > 0.0))
            throw std::domain_error("ThermoPoint: central charge must be positive");
        if (!std::isfinite(mu_l) || !std::isfinite(mu_r))
            throw std::domain_error("ThermoPoint: chemical potentials must be finite");
    }

    double temperature_l() const { return 1.0 / beta_l; }
    double temperature_r() const { return 1.0 / beta_r; }
};

// Energy and charge counting fields.
struct CountingPoint {
    cplx lambda{0.0, 0.0};
    cplx nu{0.0, 0.0};
};

}  // namespace ness
