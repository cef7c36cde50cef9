#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "ness/thermo.hpp"

namespace ness {

// Free-fermion tight-binding chain realizing the partitioning protocol:
// two halves prepared in Gibbs states at (beta_l, mu_l) / (beta_r, mu_r),
// joined at t = 0 and evolved unitarily. The state is the correlation
// matrix C_{jk} = <c^dag_k c_j> of the Gaussian state.

struct ChainSpec {
    int n_sites = 1200;     // even, >= 8
    double hopping = 1.0;   // dispersion eps(k) = -hopping * cos k
    double beta_l = 20.0;
    double mu_l = 0.0;
    double beta_r = 40.0;
    double mu_r = 0.0;

    void validate() const;
    int mid_bond() const { return n_sites / 2 - 1; }  // bond (mid, mid+1) joins the halves
};

struct SingleParticle {
    Eigen::MatrixXd h_full;
    Eigen::MatrixXd h_left;   // n/2 x n/2 decoupled block
    Eigen::MatrixXd h_right;
};

// Hopping matrices; h_left/h_right are the decoupled halves (middle bond
// cut), h_full restores the middle bond.
SingleParticle single_particle_hamiltonians(const ChainSpec& spec);

// Fermi-Dirac filling C = f(h) with f(eps) = 1/(1 + e^{beta(eps-mu)}).
// beta = +infinity is accepted and handled by projector filling.
Eigen::MatrixXcd gibbs_correlation(const Eigen::MatrixXd& h, double beta, double mu);

// Partitioned initial state: blockwise Gibbs filling of the decoupled halves.
Eigen::MatrixXcd partitioned_state(const ChainSpec& spec);

// Caches the eigendecomposition of h_full so that C(t) entries, blocks,
// and full snapshots are cheap for many times.
class EvolutionKernel {
public:
    EvolutionKernel(const Eigen::MatrixXd& h_full, const Eigen::MatrixXcd& c0);

    // Full C(t) = e^{-iht} C0 e^{iht}.
    Eigen::MatrixXcd matrix(double t) const;
    // Single entry C(t)_{jk}; O(n^2).
    cplx entry(double t, int j, int k) const;
    // Contiguous square block C(t)_{[r0, r0+nr) x [r0, r0+nr)}.
    Eigen::MatrixXcd block(double t, int r0, int nr) const;

    int size() const { return static_cast<int>(modes_.size()); }

private:
    Eigen::MatrixXd vecs_;     // eigenvectors of h_full (real symmetric)
    Eigen::VectorXd modes_;    // eigenvalues
    Eigen::MatrixXcd a_;       // V^T C0 V
};

// One-shot evolution for callers that do not reuse the decomposition.
Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& c0, const Eigen::MatrixXd& h_full,
                        double t);

enum class ProfileKind { charge_density, charge_current, energy_density, energy_current };

struct ObservableProfile {
    ProfileKind kind;
    double time = 0.0;
    std::vector<double> values;  // per site (densities) or per bond/site (currents)
};

// Density and current profiles from a correlation matrix. Currents follow
// the discrete continuity equations of the hopping hamiltonian; the energy
// current is the three-site operator.
std::vector<ObservableProfile> observable_profiles(const Eigen::MatrixXcd& c,
                                                   const ChainSpec& spec,
                                                   double time = 0.0);

// Per-bond current expectation values extracted directly from C entries.
double charge_current_at(const Eigen::MatrixXcd& c, const ChainSpec& spec, int bond);
double energy_current_at(const Eigen::MatrixXcd& c, const ChainSpec& spec, int site);

// Same observables evaluated lazily through the evolution kernel.
double charge_current_at(const EvolutionKernel& kernel, const ChainSpec& spec,
                         int bond, double t);
double energy_current_at(const EvolutionKernel& kernel, const ChainSpec& spec,
                         int site, double t);

// Single-particle matrices of the lattice chiral energy densities
// h_pm(x) ~ (h(x) -+ p(x)) / 2, supported on sites [x-1, x+1].
Eigen::MatrixXcd chiral_density_matrix(const ChainSpec& spec, int site, int sign);

// Connected correlator Tr(a (1-C) b C) of two quadratic observables.
cplx connected_correlator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                          const Eigen::MatrixXcd& c);

// Normalized decorrelation ratio |<h_+(x_left) h_-(x_right)>_c| / scale,
// with scale the geometric mean of the coincident-point autocorrelators.
// Both points must lie inside the steady window at time t.
double chiral_decorrelation(const EvolutionKernel& kernel, const ChainSpec& spec,
                            int x_left, int x_right, double t);

struct FrontReport {
    std::vector<int> sites;            // measured distances from the junction
    std::vector<double> arrival_time;  // per measured site
    std::vector<double> pre_front_residual;   // max |J| before arrival / steady value
    std::vector<double> post_front_drift;     // plateau drift over [1.5x, 2.5x]
    double steady_value = 0.0;
};

// Locates the ballistic front in per-site current time series and measures
// flatness before and after. `kind` selects the charge or energy current;
// the charge front is the cleaner probe at half filling, where the local
// bond-joining burst carries no net charge. Throws if the front never
// crosses a site within the sampled window.
FrontReport front_detector(const EvolutionKernel& kernel, const ChainSpec& spec,
                           const std::vector<int>& distances, double t_max,
                           double dt,
                           ProfileKind kind = ProfileKind::charge_current);

}  // namespace ness
