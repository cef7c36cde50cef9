#include "ness/fcs.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ness {

namespace {
constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

void QuadraticObservable::validate() const {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("QuadraticObservable: matrix must be square");
    const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw std::invalid_argument(
            "QuadraticObservable: matrix is not Hermitian (deviation "
            + std::to_string(asym) + ")");
}

QuadraticObservable charge_half_difference(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    QuadraticObservable q{Eigen::MatrixXcd::Zero(n, n),
                          ObservableKind::charge_half_difference};
    for (int j = 0; j < n; ++j) q.matrix(j, j) = j < n / 2 ? -0.5 : 0.5;
    return q;
}

QuadraticObservable energy_half_difference(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    const double th = spec.hopping / 2.0;
    QuadraticObservable q{Eigen::MatrixXcd::Zero(n, n),
                          ObservableKind::energy_half_difference};
    // Bonds strictly inside each half; the middle bond (n/2-1, n/2) is skipped.
    for (int j = 0; j + 1 < n; ++j) {
        if (j == n / 2 - 1) continue;
        const double w = j < n / 2 - 1 ? th / 2.0 : -th / 2.0;  // -(+-1/2) * (-th)
        q.matrix(j, j + 1) += w;
        q.matrix(j + 1, j) += w;
    }
    return q;
}

GeneratingFunction::GeneratingFunction(const Eigen::MatrixXcd& c0,
                                       const Eigen::MatrixXd& h_full,
                                       const QuadraticObservable& q)
    : c0_(c0), q_(q.matrix) {
    q.validate();
    if (c0.rows() != h_full.rows() || c0.rows() != q.matrix.rows())
        throw std::invalid_argument("GeneratingFunction: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(h_full);
    h_vecs_ = hs.eigenvectors();
    h_modes_ = hs.eigenvalues();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> qs(q.matrix);
    q_vecs_ = qs.eigenvectors();
    q_modes_ = qs.eigenvalues();
}

Eigen::MatrixXcd GeneratingFunction::exp_theta_q(double theta) const {
    Eigen::VectorXcd ph(q_modes_.size());
    for (Eigen::Index i = 0; i < q_modes_.size(); ++i)
        ph(i) = std::exp(I * theta * q_modes_(i));
    return q_vecs_ * ph.asDiagonal() * q_vecs_.adjoint();
}

Eigen::MatrixXcd GeneratingFunction::propagate(const Eigen::MatrixXcd& m,
                                               double t) const {
    const Eigen::MatrixXcd v = h_vecs_.cast<cplx>();
    Eigen::MatrixXcd a = v.transpose() * m * v;
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            a(r, c) *= std::exp(I * (h_modes_(r) - h_modes_(c)) * t);
    return v * a * v.transpose();
}

cplx GeneratingFunction::log_value(double counting_field, double t) const {
    if (counting_field == 0.0 || t == 0.0) return {};
    const Eigen::MatrixXcd e_plus = exp_theta_q(counting_field);
    const Eigen::MatrixXcd m =
        (Eigen::MatrixXcd::Identity(c0_.rows(), c0_.cols()) - c0_)
        + c0_ * (propagate(e_plus, t) * e_plus.adjoint());
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    cplx log_det = lu.permutationP().determinant() < 0 ? cplx{0.0, kPi} : cplx{};
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const cplx u = lu.matrixLU()(i, i);
        if (u == cplx{})
            throw std::runtime_error(
                "generating_function: singular determinant factor at pivot "
                + std::to_string(i));
        log_det += std::log(u);
    }
    return log_det;
}

cplx GeneratingFunction::value(double counting_field, double t) const {
    if (std::abs(counting_field) > 2.0 * kPi)
        throw std::domain_error("generating_function: |counting field| must be <= 2 pi");
    if (counting_field == 0.0 || t == 0.0) return 1.0;
    const cplx z = std::exp(log_value(counting_field, t));
    if (std::abs(z) > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "generating_function: |Z| = " << std::abs(z)
            << " exceeds 1 at theta = " << counting_field << ", t = " << t;
        throw std::runtime_error(msg.str());
    }
    return z;
}

double GeneratingFunction::mean_transfer(double t) const {
    const cplx tr = ((propagate(q_, t) - q_) * c0_).trace();
    return tr.real();
}

cplx generating_function(const Eigen::MatrixXcd& c0, const Eigen::MatrixXd& h_full,
                         const QuadraticObservable& q, double counting_field,
                         double t) {
    return GeneratingFunction(c0, h_full, q).value(counting_field, t);
}

namespace {

// Cumulants 1..4 of log Z from samples g(h), g(2h), using Z(-theta) = conj Z(theta).
// log Z(theta) = sum_n kappa_n (i theta)^n / n!.
std::array<double, 4> stencil_cumulants(cplx gh, cplx g2h, double h) {
    return {std::imag(gh) / h,
            -2.0 * std::real(gh) / (h * h),
            -(std::imag(g2h) - 2.0 * std::imag(gh)) / (h * h * h),
            (2.0 * std::real(g2h) - 8.0 * std::real(gh)) / (h * h * h * h)};
}

}  // namespace

CumulantRateReport cumulant_rates(const Eigen::MatrixXcd& c0,
                                  const Eigen::MatrixXd& h_full,
                                  const QuadraticObservable& q,
                                  const std::vector<double>& t_grid, int n_max,
                                  double residual_threshold) {
    if (n_max < 1 || n_max > 4)
        throw std::invalid_argument("cumulant_rates: n_max must be in [1, 4]");
    if (t_grid.size() < 2)
        throw std::invalid_argument("cumulant_rates: need at least two times");

    const GeneratingFunction gf(c0, h_full, q);
    constexpr std::array<double, 3> steps = {1e-2, 5e-3, 2.5e-3};

    CumulantRateReport report;
    report.t_grid = t_grid;
    report.cumulants.assign(static_cast<size_t>(n_max), {});

    for (double t : t_grid) {
        // g at the four distinct positive fields covering all stencils.
        const cplx g1 = gf.log_value(steps[2], t);          // 2.5e-3
        const cplx g2 = gf.log_value(steps[1], t);          // 5e-3
        const cplx g3 = gf.log_value(steps[0], t);          // 1e-2
        const cplx g4 = gf.log_value(2.0 * steps[0], t);    // 2e-2
        const auto d_h1 = stencil_cumulants(g3, g4, steps[0]);
        const auto d_h2 = stencil_cumulants(g2, g3, steps[1]);
        const auto d_h3 = stencil_cumulants(g1, g2, steps[2]);
        for (int n = 1; n <= n_max; ++n) {
            const size_t i = static_cast<size_t>(n - 1);
            const double r12 = (4.0 * d_h2[i] - d_h1[i]) / 3.0;
            const double r23 = (4.0 * d_h3[i] - d_h2[i]) / 3.0;
            report.cumulants[i].push_back((16.0 * r23 - r12) / 15.0);
        }
    }

    // Linear fit kappa(t) = a + rate * t per order.
    const auto m = static_cast<double>(t_grid.size());
    double st = 0.0, stt = 0.0;
    for (double t : t_grid) {
        st += t;
        stt += t * t;
    }
    for (int n = 1; n <= n_max; ++n) {
        const auto& k = report.cumulants[static_cast<size_t>(n - 1)];
        double sk = 0.0, stk = 0.0;
        for (size_t i = 0; i < k.size(); ++i) {
            sk += k[i];
            stk += t_grid[i] * k[i];
        }
        const double denom = m * stt - st * st;
        const double rate = (m * stk - st * sk) / denom;
        const double offset = (sk - rate * st) / m;
        double ss = 0.0;
        for (size_t i = 0; i < k.size(); ++i) {
            const double r = k[i] - (offset + rate * t_grid[i]);
            ss += r * r;
        }
        const double span = t_grid.back() - t_grid.front();
        const double scale = std::max(std::abs(rate) * span, 1e-12);
        const double residual = std::sqrt(ss / m) / scale;
        report.rates.push_back(rate);
        report.fit_residuals.push_back(residual);
        report.flagged.push_back(residual > residual_threshold);
    }
    return report;
}

}  // namespace ness
