#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace ness {

// Central difference with one Richardson extrapolation step.
// Step h is chosen by the caller (typically 1e-5 * max(1, |scale|)).
template <typename F>
auto central_derivative(F&& f, double x, double h) {
    auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    auto d1 = d(h);
    auto d2 = d(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

inline double fd_step(double scale) { return 1e-5 * std::max(1.0, std::abs(scale)); }

// Second central derivative, Richardson-extrapolated once.
template <typename F>
auto second_derivative(F&& f, double x, double h) {
    auto d = [&](double step) {
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
    };
    auto d1 = d(h);
    auto d2 = d(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace ness
