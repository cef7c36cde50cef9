#pragma once

#include <functional>
#include <stdexcept>

#include "ness/thermo.hpp"

namespace ness {

// Adaptive Gauss-Kronrod (G7/K15) integration of a complex-valued integrand
// on [a, b]. Throws on non-convergence.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol = 1e-12, double rel_tol = 1e-10,
                  int max_depth = 30);

double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         double abs_tol = 1e-12, double rel_tol = 1e-10,
                         int max_depth = 30);

}  // namespace ness
