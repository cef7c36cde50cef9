#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fock_oracle.hpp"
#include "ness/lattice.hpp"

using namespace ness;

namespace {
ChainSpec small_spec(int n, double bl = 5.0, double br = 10.0, double ml = 0.0,
                     double mr = 0.0) {
    ChainSpec spec;
    spec.n_sites = n;
    spec.beta_l = bl;
    spec.beta_r = br;
    spec.mu_l = ml;
    spec.mu_r = mr;
    return spec;
}
}  // namespace

TEST_CASE("chain spec validation") {
    CHECK_THROWS(small_spec(7).validate());
    CHECK_THROWS(small_spec(4).validate());
    ChainSpec bad = small_spec(20);
    bad.mu_l = 1.5;
    CHECK_THROWS(bad.validate());
    CHECK(small_spec(8).mid_bond() == 3);
}

TEST_CASE("hopping matrices and spectrum") {
    const auto sp = single_particle_hamiltonians(small_spec(64));
    CHECK(sp.h_full(0, 1) == doctest::Approx(-0.5));
    CHECK(sp.h_left.rows() == 32);
    // Middle bond only present in h_full.
    CHECK(sp.h_full(31, 32) == doctest::Approx(-0.5));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.h_full);
    CHECK(es.eigenvalues().minCoeff() > -1.0);
    CHECK(es.eigenvalues().maxCoeff() < 1.0);
}

TEST_CASE("gibbs filling limits") {
    const auto sp = single_particle_hamiltonians(small_spec(40));
    // Infinite temperature: C = I/2.
    const Eigen::MatrixXcd hot = gibbs_correlation(sp.h_full, 1e-9, 0.0);
    CHECK((hot - 0.5 * Eigen::MatrixXcd::Identity(40, 40)).cwiseAbs().maxCoeff()
          < 1e-9);
    // Zero temperature: projector onto the Fermi sea.
    const Eigen::MatrixXcd cold = gibbs_correlation(
        sp.h_full, std::numeric_limits<double>::infinity(), 0.0);
    CHECK((cold * cold - cold).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(cold.trace().real() - 20.0) < 1e-12);
    // Half filling at mu = 0 for any temperature.
    CHECK(std::abs(gibbs_correlation(sp.h_full, 3.0, 0.0).trace().real() - 20.0)
          < 1e-12);
    CHECK_THROWS(gibbs_correlation(sp.h_full, -1.0, 0.0));
}

TEST_CASE("gibbs state matches the many-body thermal correlation matrix") {
    const int n = 8;
    const auto sp = single_particle_hamiltonians(small_spec(n, 2.0, 2.0, 0.1, 0.1));
    const double beta = 2.0, mu = 0.1;
    const Eigen::MatrixXcd c = gibbs_correlation(sp.h_full, beta, mu);
    const Eigen::MatrixXcd w =
        beta
        * (sp.h_full.cast<cplx>() - mu * Eigen::MatrixXcd::Identity(n, n));
    const Eigen::MatrixXcd rho = fock::gibbs_density(fock::quadratic_operator(w));
    const Eigen::MatrixXcd c_fock = fock::correlation_matrix(rho, n);
    CHECK((c - c_fock).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("equilibrium state is stationary") {
    const auto sp = single_particle_hamiltonians(small_spec(40));
    const Eigen::MatrixXcd c0 = gibbs_correlation(sp.h_full, 4.0, 0.1);
    const EvolutionKernel kernel(sp.h_full, c0);
    CHECK((kernel.matrix(17.3) - c0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("kernel entry, block and one-shot evolution agree") {
    const ChainSpec spec = small_spec(30);
    const auto sp = single_particle_hamiltonians(spec);
    const Eigen::MatrixXcd c0 = partitioned_state(spec);
    const EvolutionKernel kernel(sp.h_full, c0);
    const double t = 6.4;
    const Eigen::MatrixXcd full = kernel.matrix(t);
    CHECK((full - evolve(c0, sp.h_full, t)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(kernel.entry(t, 4, 21) - full(4, 21)) < 1e-13);
    CHECK((kernel.block(t, 10, 6) - full.block(10, 10, 6, 6)).cwiseAbs().maxCoeff()
          < 1e-13);
    // Unitarity preserves the spectrum of C.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e0(c0), et(full);
    CHECK((e0.eigenvalues() - et.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("discrete continuity equations") {
    const ChainSpec spec = small_spec(100, 4.0, 8.0, 0.1, -0.05);
    const auto sp = single_particle_hamiltonians(spec);
    const EvolutionKernel kernel(sp.h_full, partitioned_state(spec));
    const double t = 30.0, dt = 1e-4;
    const Eigen::MatrixXcd cm = kernel.matrix(t - dt);
    const Eigen::MatrixXcd cp = kernel.matrix(t + dt);
    const Eigen::MatrixXcd c = kernel.matrix(t);
    const double th = spec.hopping / 2.0;
    for (int j = 45; j <= 55; ++j) {
        // Charge: d<n_j>/dt = J_{j-1} - J_j.
        const double dn = (cp(j, j).real() - cm(j, j).real()) / (2.0 * dt);
        const double div = charge_current_at(c, spec, j - 1)
                         - charge_current_at(c, spec, j);
        CHECK(std::abs(dn - div) < 1e-6);
        // Energy: d<b_j>/dt = J^E_j - J^E_{j+1} for the bond density b_j.
        const double db = -2.0 * th
                          * (cp(j, j + 1).real() - cm(j, j + 1).real())
                          / (2.0 * dt);
        const double dive = energy_current_at(c, spec, j)
                          - energy_current_at(c, spec, j + 1);
        CHECK(std::abs(db - dive) < 1e-8);
    }
}

TEST_CASE("observable profiles are real and consistent") {
    const ChainSpec spec = small_spec(60, 4.0, 8.0, 0.1, -0.1);
    const auto sp = single_particle_hamiltonians(spec);
    const EvolutionKernel kernel(sp.h_full, partitioned_state(spec));
    const double t = 12.0;
    const Eigen::MatrixXcd c = kernel.matrix(t);
    const auto profiles = observable_profiles(c, spec, t);
    REQUIRE(profiles.size() == 4);
    CHECK(profiles[0].kind == ProfileKind::charge_density);
    CHECK(profiles[0].values.size() == 60);
    CHECK(profiles[1].values.size() == 59);
    for (const auto& prof : profiles)
        for (double v : prof.values) CHECK(std::isfinite(v));
    // Total charge is conserved under the evolution.
    double total = 0.0;
    for (double v : profiles[0].values) total += v;
    CHECK(std::abs(total - partitioned_state(spec).trace().real()) < 1e-10);
    // Currents agree with the direct accessors.
    CHECK(profiles[1].values[20]
          == doctest::Approx(charge_current_at(kernel, spec, 20, t)).epsilon(1e-12));
    CHECK(profiles[3].values[20]
          == doctest::Approx(energy_current_at(kernel, spec, 20, t)).epsilon(1e-12));
}

TEST_CASE("connected correlator matches the many-body oracle") {
    const int n = 8;
    const auto sp = single_particle_hamiltonians(small_spec(n, 1.5, 1.5));
    const Eigen::MatrixXcd c = gibbs_correlation(sp.h_full, 1.5, 0.0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    a(1, 2) = cplx{0.3, 0.2};
    a(2, 1) = cplx{0.3, -0.2};
    a(1, 1) = 0.7;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
    b(3, 4) = cplx{-0.1, 0.4};
    b(4, 3) = cplx{-0.1, -0.4};
    b(4, 4) = -0.2;
    const Eigen::MatrixXcd w = 1.5 * sp.h_full.cast<cplx>();
    const Eigen::MatrixXcd rho = fock::gibbs_density(fock::quadratic_operator(w));
    const Eigen::MatrixXcd big_a = fock::quadratic_operator(a);
    const Eigen::MatrixXcd big_b = fock::quadratic_operator(b);
    const cplx oracle = (rho * big_a * big_b).trace()
                      - (rho * big_a).trace() * (rho * big_b).trace();
    CHECK(std::abs(connected_correlator(a, b, c) - oracle) < 1e-12);
}

TEST_CASE("chiral decorrelation falls with separation") {
    const ChainSpec spec = small_spec(400, 10.0, 20.0);
    const auto sp = single_particle_hamiltonians(spec);
    const EvolutionKernel kernel(sp.h_full, partitioned_state(spec));
    const int c = spec.n_sites / 2;
    const double t = 90.0;
    double prev = 1e300;
    for (int sep : {10, 20, 40}) {
        const double r = chiral_decorrelation(kernel, spec, c - sep / 2,
                                              c + sep / 2, t);
        CHECK(r < 0.05);
        CHECK(r < prev);
        prev = r;
    }
    // Outside the steady window: too early or contaminated by reflections.
    CHECK_THROWS_AS(
        (void)chiral_decorrelation(kernel, spec, c - 20, c + 20, 5.0),
        std::domain_error);
    CHECK_THROWS_AS(
        (void)chiral_decorrelation(kernel, spec, c - 20, c + 20, 1e4),
        std::domain_error);
}

TEST_CASE("front detector kinematics on a short chain") {
    ChainSpec spec = small_spec(360, 20.0, 40.0, 0.1, -0.1);
    const auto sp = single_particle_hamiltonians(spec);
    const EvolutionKernel kernel(sp.h_full, partitioned_state(spec));
    const auto report = front_detector(kernel, spec, {40, 80}, 170.0, 1.0);
    REQUIRE(report.arrival_time.size() == 2);
    for (size_t i = 0; i < report.sites.size(); ++i) {
        const double expected = report.sites[i] / spec.hopping;
        CHECK(std::abs(report.arrival_time[i] - expected) / expected < 0.1);
        CHECK(report.pre_front_residual[i] < 0.05);
        // Looser than the production geometry: the plateau window is
        // short this close to the junction.
        CHECK(report.post_front_drift[i] < 0.03);
    }
    // A site the front cannot reach in time.
    CHECK_THROWS_AS((void)front_detector(kernel, spec, {150}, 60.0, 1.0),
                    std::runtime_error);
}
