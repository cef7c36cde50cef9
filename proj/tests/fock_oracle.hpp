#pragma once

// Test-only brute-force many-body machinery: builds operators on the full
// 2^n Fock space (Jordan-Wigner occupation basis) to ground-truth the
// single-particle determinant formulas for small chains.

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "ness/thermo.hpp"

namespace fock {

using ness::cplx;

// Many-body matrix of sum_{jk} h_{jk} c^dag_j c_k in the occupation basis
// (bit j of the index = occupation of site j), with string signs.
inline Eigen::MatrixXcd quadratic_operator(const Eigen::MatrixXcd& h) {
    const int n = static_cast<int>(h.rows());
    if (n > 14) throw std::invalid_argument("fock: too many sites");
    const int dim = 1 << n;
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) {
        for (int k = 0; k < n; ++k) {
            if (!((s >> k) & 1)) continue;
            const int s1 = s & ~(1 << k);
            const bool sign_k =
                std::popcount(static_cast<unsigned>(s) & ((1u << k) - 1)) & 1;
            for (int j = 0; j < n; ++j) {
                if (h(j, k) == cplx{}) continue;
                if ((s1 >> j) & 1) continue;
                const int s2 = s1 | (1 << j);
                const bool sign_j =
                    std::popcount(static_cast<unsigned>(s1) & ((1u << j) - 1)) & 1;
                big(s2, s) += (sign_k != sign_j ? -1.0 : 1.0) * h(j, k);
            }
        }
    }
    return big;
}

// Normalized Gibbs density matrix e^{-W} / Tr e^{-W} for a Hermitian W.
inline Eigen::MatrixXcd gibbs_density(const Eigen::MatrixXcd& big_w) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(big_w);
    Eigen::VectorXd expw(es.eigenvalues().size());
    const double w0 = es.eigenvalues().minCoeff();
    for (Eigen::Index i = 0; i < expw.size(); ++i)
        expw(i) = std::exp(-(es.eigenvalues()(i) - w0));
    expw /= expw.sum();
    return es.eigenvectors() * expw.asDiagonal() * es.eigenvectors().adjoint();
}

// Correlation matrix C_{jk} = Tr(rho c^dag_k c_j) of a many-body state.
inline Eigen::MatrixXcd correlation_matrix(const Eigen::MatrixXcd& rho, int n) {
    Eigen::MatrixXcd c(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Eigen::MatrixXcd hop = Eigen::MatrixXcd::Zero(n, n);
            hop(j, k) = 1.0;
            c(j, k) = (quadratic_operator(hop) * rho).trace();
        }
    return c;
}

// Explicit two-time projective protocol for an observable diagonal in the
// occupation basis (eigenvalue q_s per basis state): measure at t = 0,
// evolve with U = e^{-iHt}, measure again; returns the characteristic
// function of the recorded difference.
inline cplx two_time_protocol(const Eigen::MatrixXcd& rho0,
                              const Eigen::MatrixXcd& big_h,
                              const Eigen::VectorXd& q_diag, double theta,
                              double t) {
    const Eigen::Index dim = rho0.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(big_h);
    Eigen::VectorXcd ph(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        ph(i) = std::exp(cplx{0.0, -es.eigenvalues()(i) * t});
    const Eigen::MatrixXcd u =
        es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();

    // First measurement: keep only blocks with equal eigenvalue, weighted
    // by e^{-i theta q_a}.
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s)
        for (Eigen::Index p = 0; p < dim; ++p)
            if (std::abs(q_diag(s) - q_diag(p)) < 1e-12)
                r(s, p) = rho0(s, p) * std::exp(cplx{0.0, -theta * q_diag(s)});

    const Eigen::MatrixXcd evolved = u * r * u.adjoint();
    cplx z{};
    for (Eigen::Index s = 0; s < dim; ++s)
        z += std::exp(cplx{0.0, theta * q_diag(s)}) * evolved(s, s);
    return z;
}

}  // namespace fock
