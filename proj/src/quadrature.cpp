#include "ness/quadrature.hpp"

#include <array>
#include <cmath>

namespace ness {

namespace {

// K15 nodes/weights on [-1, 1]; the odd-indexed nodes form the embedded G7 rule.
constexpr std::array<double, 15> kNodes = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813};
constexpr std::array<double, 15> kWeightsK = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr std::array<double, 7> kWeightsG = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Panel {
    cplx integral;
    double error;
};

Panel eval_panel(const std::function<cplx(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx gk{}, g{};
    for (int i = 0; i < 15; ++i) {
        const cplx v = f(mid + half * kNodes[static_cast<size_t>(i)]);
        gk += kWeightsK[static_cast<size_t>(i)] * v;
        if (i % 2 == 1) g += kWeightsG[static_cast<size_t>(i / 2)] * v;
    }
    return {gk * half, std::abs(gk - g) * half};
}

cplx adapt(const std::function<cplx(double)>& f, double a, double b,
           double abs_tol, double rel_tol, int depth, double scale) {
    const Panel p = eval_panel(f, a, b);
    if (p.error <= abs_tol || p.error <= rel_tol * scale) return p.integral;
    if (depth <= 0)
        throw std::runtime_error("integrate_gk: did not converge on ["
                                 + std::to_string(a) + ", " + std::to_string(b) + "]");
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, abs_tol / 2, rel_tol, depth - 1, scale)
         + adapt(f, mid, b, abs_tol / 2, rel_tol, depth - 1, scale);
}

}  // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol, double rel_tol, int max_depth) {
    const Panel first = eval_panel(f, a, b);
    const double scale = std::max(std::abs(first.integral), 1e-30);
    if (first.error <= abs_tol || first.error <= rel_tol * scale) return first.integral;
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, abs_tol / 2, rel_tol, max_depth, scale)
         + adapt(f, mid, b, abs_tol / 2, rel_tol, max_depth, scale);
}

double integrate_gk_real(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, int max_depth) {
    return integrate_gk([&](double x) { return cplx{f(x), 0.0}; }, a, b, abs_tol,
                        rel_tol, max_depth)
        .real();
}

}  // namespace ness
