#include "ness/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ness {

namespace {
constexpr cplx I{0.0, 1.0};

double fermi(double eps, double beta, double mu) {
    const double x = beta * (eps - mu);
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}
}  // namespace

void ChainSpec::validate() const {
    if (n_sites < 8 || n_sites % 2 != 0)
        throw std::invalid_argument("ChainSpec: n_sites must be even and >= 8");
    if (!(hopping > 0.0)) throw std::invalid_argument("ChainSpec: hopping must be positive");
    if (std::abs(mu_l) >= hopping || std::abs(mu_r) >= hopping)
        throw std::invalid_argument(
            "ChainSpec: |mu| must stay below the band edge (|mu| < hopping)");
    if (!(beta_l > 0.0) || !(beta_r > 0.0))
        throw std::invalid_argument("ChainSpec: reservoir betas must be positive");
}

SingleParticle single_particle_hamiltonians(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    const double th = spec.hopping / 2.0;  // eps(k) = -hopping*cos k
    SingleParticle out;
    out.h_full = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j + 1 < n; ++j) {
        out.h_full(j, j + 1) = -th;
        out.h_full(j + 1, j) = -th;
    }
    const int half = n / 2;
    out.h_left = out.h_full.topLeftCorner(half, half);
    out.h_right = out.h_full.bottomRightCorner(half, half);
    return out;
}

Eigen::MatrixXcd gibbs_correlation(const Eigen::MatrixXd& h, double beta, double mu) {
    if (!(beta > 0.0)) throw std::domain_error("gibbs_correlation: beta must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& eps = es.eigenvalues();
    Eigen::VectorXd fill(eps.size());
    if (std::isinf(beta)) {
        for (Eigen::Index i = 0; i < eps.size(); ++i)
            fill(i) = eps(i) < mu - 1e-12 ? 1.0 : (eps(i) > mu + 1e-12 ? 0.0 : 0.5);
    } else {
        for (Eigen::Index i = 0; i < eps.size(); ++i) fill(i) = fermi(eps(i), beta, mu);
    }
    Eigen::MatrixXd c = es.eigenvectors() * fill.asDiagonal() * es.eigenvectors().transpose();
    return c.cast<cplx>();
}

Eigen::MatrixXcd partitioned_state(const ChainSpec& spec) {
    const auto sp = single_particle_hamiltonians(spec);
    const int half = spec.n_sites / 2;
    Eigen::MatrixXcd c0 = Eigen::MatrixXcd::Zero(spec.n_sites, spec.n_sites);
    c0.topLeftCorner(half, half) = gibbs_correlation(sp.h_left, spec.beta_l, spec.mu_l);
    c0.bottomRightCorner(half, half) =
        gibbs_correlation(sp.h_right, spec.beta_r, spec.mu_r);
    return c0;
}

EvolutionKernel::EvolutionKernel(const Eigen::MatrixXd& h_full,
                                 const Eigen::MatrixXcd& c0) {
    if (h_full.rows() != c0.rows() || h_full.cols() != c0.cols())
        throw std::invalid_argument("EvolutionKernel: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_full);
    vecs_ = es.eigenvectors();
    modes_ = es.eigenvalues();
    a_ = vecs_.transpose().cast<cplx>() * c0 * vecs_.cast<cplx>();
}

namespace {
Eigen::VectorXcd phases(const Eigen::VectorXd& modes, double t) {
    Eigen::VectorXcd p(modes.size());
    for (Eigen::Index i = 0; i < modes.size(); ++i) p(i) = std::exp(-I * modes(i) * t);
    return p;
}
}  // namespace

Eigen::MatrixXcd EvolutionKernel::matrix(double t) const {
    const Eigen::VectorXcd ph = phases(modes_, t);
    Eigen::MatrixXcd b = ph.asDiagonal() * a_ * ph.conjugate().asDiagonal();
    return vecs_.cast<cplx>() * b * vecs_.transpose().cast<cplx>();
}

cplx EvolutionKernel::entry(double t, int j, int k) const {
    const Eigen::VectorXcd ph = phases(modes_, t);
    Eigen::VectorXcd x = vecs_.row(j).transpose().cast<cplx>().cwiseProduct(ph);
    Eigen::VectorXcd y = vecs_.row(k).transpose().cast<cplx>().cwiseProduct(ph.conjugate());
    return x.transpose() * (a_ * y);
}

Eigen::MatrixXcd EvolutionKernel::block(double t, int r0, int nr) const {
    const Eigen::VectorXcd ph = phases(modes_, t);
    Eigen::MatrixXcd b = ph.asDiagonal() * a_ * ph.conjugate().asDiagonal();
    Eigen::MatrixXcd vsub = vecs_.middleRows(r0, nr).cast<cplx>();
    return vsub * b * vsub.transpose();
}

Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& c0, const Eigen::MatrixXd& h_full,
                        double t) {
    return EvolutionKernel(h_full, c0).matrix(t);
}

double charge_current_at(const Eigen::MatrixXcd& c, const ChainSpec& spec, int bond) {
    const double th = spec.hopping / 2.0;
    return -2.0 * th * std::imag(c(bond, bond + 1));
}

double energy_current_at(const Eigen::MatrixXcd& c, const ChainSpec& spec, int site) {
    const double th = spec.hopping / 2.0;
    return -2.0 * th * th * std::imag(c(site + 1, site - 1));
}

double charge_current_at(const EvolutionKernel& kernel, const ChainSpec& spec,
                         int bond, double t) {
    const double th = spec.hopping / 2.0;
    return -2.0 * th * std::imag(kernel.entry(t, bond, bond + 1));
}

double energy_current_at(const EvolutionKernel& kernel, const ChainSpec& spec,
                         int site, double t) {
    const double th = spec.hopping / 2.0;
    return -2.0 * th * th * std::imag(kernel.entry(t, site + 1, site - 1));
}

std::vector<ObservableProfile> observable_profiles(const Eigen::MatrixXcd& c,
                                                   const ChainSpec& spec,
                                                   double time) {
    spec.validate();
    const int n = spec.n_sites;
    const double th = spec.hopping / 2.0;
    std::vector<ObservableProfile> out;

    ObservableProfile nq{ProfileKind::charge_density, time, std::vector<double>(n)};
    for (int j = 0; j < n; ++j) nq.values[static_cast<size_t>(j)] = std::real(c(j, j));
    out.push_back(std::move(nq));

    ObservableProfile jq{ProfileKind::charge_current, time,
                         std::vector<double>(static_cast<size_t>(n - 1))};
    for (int j = 0; j + 1 < n; ++j)
        jq.values[static_cast<size_t>(j)] = charge_current_at(c, spec, j);
    out.push_back(std::move(jq));

    // Site energy density: half of each adjacent bond energy.
    ObservableProfile he{ProfileKind::energy_density, time, std::vector<double>(n)};
    auto bond_energy = [&](int j) { return -2.0 * th * std::real(c(j, j + 1)); };
    for (int j = 0; j < n; ++j) {
        double e = 0.0;
        if (j > 0) e += 0.5 * bond_energy(j - 1);
        if (j + 1 < n) e += 0.5 * bond_energy(j);
        he.values[static_cast<size_t>(j)] = e;
    }
    out.push_back(std::move(he));

    ObservableProfile je{ProfileKind::energy_current, time,
                         std::vector<double>(static_cast<size_t>(n))};
    for (int j = 1; j + 1 < n; ++j)
        je.values[static_cast<size_t>(j)] = energy_current_at(c, spec, j);
    out.push_back(std::move(je));
    return out;
}

Eigen::MatrixXcd chiral_density_matrix(const ChainSpec& spec, int site, int sign) {
    if (site < 1 || site + 1 >= spec.n_sites)
        throw std::invalid_argument("chiral_density_matrix: site too close to the edge");
    if (sign != +1 && sign != -1)
        throw std::invalid_argument("chiral_density_matrix: sign must be +-1");
    const double th = spec.hopping / 2.0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(spec.n_sites, spec.n_sites);
    // h(x)/2: half of the two adjacent half-bond energies.
    m(site, site - 1) = m(site - 1, site) = -th / 4.0;
    m(site, site + 1) = m(site + 1, site) = -th / 4.0;
    // +- p(x)/2 with p the three-site energy-current operator.
    m(site - 1, site + 1) += static_cast<double>(sign) * I * th * th / 2.0;
    m(site + 1, site - 1) += -static_cast<double>(sign) * I * th * th / 2.0;
    return m;
}

cplx connected_correlator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                          const Eigen::MatrixXcd& c) {
    const Eigen::MatrixXcd one_minus =
        Eigen::MatrixXcd::Identity(c.rows(), c.cols()) - c;
    return (a * one_minus * b * c).trace();
}

namespace {

// Tr(a (1-C) b C) using only the C entries covering the two local supports.
cplx local_connected(const EvolutionKernel& kernel, double t,
                     const Eigen::MatrixXcd& a, const std::vector<int>& sa,
                     const Eigen::MatrixXcd& b, const std::vector<int>& sb) {
    const auto na = sa.size();
    const auto nb = sb.size();
    Eigen::MatrixXcd c_ab(na, nb), c_ba(nb, na);
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < nb; ++j) c_ab(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)) =
            kernel.entry(t, sa[i], sb[j]);
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < na; ++j) c_ba(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)) =
            kernel.entry(t, sb[i], sa[j]);
    cplx sum{};
    for (size_t j = 0; j < na; ++j)
        for (size_t k = 0; k < na; ++k) {
            const cplx ajk = a(sa[j], sa[k]);
            if (ajk == cplx{}) continue;
            for (size_t m = 0; m < nb; ++m) {
                const cplx delta_km = 0.0;  // supports are disjoint or identical
                cplx one_minus_c = (sa[k] == sb[m] ? 1.0 : 0.0) - c_ab(
                    static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
                (void)delta_km;
                for (size_t n = 0; n < nb; ++n) {
                    const cplx bmn = b(sb[m], sb[n]);
                    if (bmn == cplx{}) continue;
                    sum += ajk * one_minus_c * bmn
                         * c_ba(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j));
                }
            }
        }
    return sum;
}

std::vector<int> support3(int site) { return {site - 1, site, site + 1}; }

void check_steady_window(const ChainSpec& spec, int site, double t) {
    const int center = spec.n_sites / 2;
    const double dist = std::abs(site - center);
    if (t < dist + 20.0 || t > spec.n_sites / 2.0) {
        std::ostringstream msg;
        msg << "chiral_decorrelation: site " << site << " at time " << t
            << " is outside the steady window (need dist+20 <= t <= n/2)";
        throw std::domain_error(msg.str());
    }
}

}  // namespace

double chiral_decorrelation(const EvolutionKernel& kernel, const ChainSpec& spec,
                            int x_left, int x_right, double t) {
    spec.validate();
    check_steady_window(spec, x_left, t);
    check_steady_window(spec, x_right, t);
    const Eigen::MatrixXcd hp = chiral_density_matrix(spec, x_left, +1);
    const Eigen::MatrixXcd hm = chiral_density_matrix(spec, x_right, -1);
    const auto sl = support3(x_left);
    const auto sr = support3(x_right);
    const cplx cross = local_connected(kernel, t, hp, sl, hm, sr);
    const cplx auto_p = local_connected(kernel, t, hp, sl, hp, sl);
    const cplx auto_m = local_connected(kernel, t, hm, sr, hm, sr);
    const double scale = std::sqrt(std::abs(auto_p) * std::abs(auto_m));
    if (scale <= 0.0)
        throw std::runtime_error("chiral_decorrelation: vanishing autocorrelator scale");
    return std::abs(cross) / scale;
}

FrontReport front_detector(const EvolutionKernel& kernel, const ChainSpec& spec,
                           const std::vector<int>& distances, double t_max,
                           double dt, ProfileKind kind) {
    spec.validate();
    if (kind != ProfileKind::charge_current && kind != ProfileKind::energy_current)
        throw std::invalid_argument("front_detector: kind must be a current profile");
    const int center = spec.n_sites / 2;
    auto current = [&](int site, double t) {
        // Probe the bond just left of `site` for charge so both kinds sit
        // at the same distance from the junction.
        return kind == ProfileKind::charge_current
                   ? charge_current_at(kernel, spec, site - 1, t)
                   : energy_current_at(kernel, spec, site, t);
    };
    FrontReport report;
    report.sites = distances;

    // Steady reference: mid-chain current averaged over the late window.
    {
        double acc = 0.0;
        int cnt = 0;
        for (double t = 0.5 * t_max; t <= t_max; t += dt) {
            acc += current(center, t);
            ++cnt;
        }
        report.steady_value = acc / cnt;
    }
    if (std::abs(report.steady_value) < 1e-14)
        throw std::runtime_error("front_detector: steady current is zero; no front to track");

    for (int d : distances) {
        const int site = center + d;
        std::vector<double> ts, js;
        for (double t = dt; t <= t_max; t += dt) {
            ts.push_back(t);
            js.push_back(current(site, t));
        }
        // Arrival: first crossing of half the steady value.
        double arrival = -1.0;
        for (size_t i = 0; i < ts.size(); ++i) {
            if (js[i] / report.steady_value >= 0.5) {
                arrival = ts[i];
                break;
            }
        }
        if (arrival < 0.0) {
            std::ostringstream msg;
            msg << "front_detector: front never reached site at distance " << d
                << " within t_max = " << t_max;
            throw std::runtime_error(msg.str());
        }
        double pre = 0.0;
        for (size_t i = 0; i < ts.size(); ++i)
            if (ts[i] < 0.8 * arrival) pre = std::max(pre, std::abs(js[i]));
        double lo = std::numeric_limits<double>::max();
        double hi = std::numeric_limits<double>::lowest();
        bool have_window = false;
        for (size_t i = 0; i < ts.size(); ++i)
            if (ts[i] >= 1.5 * d && ts[i] <= std::min(2.5 * d, t_max)) {
                lo = std::min(lo, js[i]);
                hi = std::max(hi, js[i]);
                have_window = true;
            }
        report.arrival_time.push_back(arrival);
        report.pre_front_residual.push_back(pre / std::abs(report.steady_value));
        report.post_front_drift.push_back(
            have_window ? (hi - lo) / std::abs(report.steady_value) : 0.0);
    }
    return report;
}

}  // namespace ness
