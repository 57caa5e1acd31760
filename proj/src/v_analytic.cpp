#include "qsacs/v_analytic.hpp"

#include "qsacs/errors.hpp"
#include "qsacs/sacs.hpp"

#include <cmath>

namespace qsacs {

ModelParams VParams::to_model() const
{
    ModelParams p;
    p.field_freq = field_freq;
    p.level_energy = {omega1, omega3, omega3};
    p.mu12 = mu12();
    p.mu13 = mu13();
    p.mu23 = 0.0;
    p.n_atoms = n_atoms;
    p.rwa = false;
    p.config = AtomicConfiguration::V;
    return p;
}

VParams VParams::from_model(const ModelParams& p)
{
    if (p.config != AtomicConfiguration::V)
        throw InvalidInput("closed forms exist for the V configuration only");
    if (p.level_energy[1] != p.level_energy[2])
        throw InvalidInput("closed forms require double resonance (w2 = w3)");
    if (p.rwa)
        throw InvalidInput("closed forms are stated for the full Hamiltonian");
    VParams vp;
    vp.mu = std::hypot(p.mu12, p.mu13);
    vp.theta = std::atan2(p.mu13, p.mu12);
    vp.field_freq = p.field_freq;
    vp.omega3 = p.level_energy[2];
    vp.omega1 = p.level_energy[0];
    vp.n_atoms = p.n_atoms;
    return vp;
}

void validate(const VParams& vp)
{
    if (!(vp.mu >= 0.0) || !std::isfinite(vp.mu))
        throw InvalidInput("mu must be finite and non-negative");
    if (!(vp.theta >= 0.0 && vp.theta <= std::numbers::pi / 2 + 1e-15))
        throw InvalidInput("theta must lie in [0, pi/2]");
    validate(vp.to_model());
}

std::string_view to_string(Approximation a)
{
    switch (a) {
    case Approximation::Coherent:
        return "coherent";
    case Approximation::Even:
        return "even";
    case Approximation::Odd:
        return "odd";
    }
    return "?";
}

Regime regime(const VParams& vp)
{
    return vp.mu * vp.mu > vp.critical_mu_sq() ? Regime::Collective : Regime::Normal;
}

VCritical critical_point_v(const VParams& vp)
{
    validate(vp);
    if (regime(vp) == Regime::Normal)
        return {};
    const double mu2 = vp.mu * vp.mu;
    const double c = vp.critical_mu_sq();
    const double u = (mu2 - c) / (mu2 + c);
    const double y = std::sqrt(u);
    VCritical cp;
    cp.rho2 = std::cos(vp.theta) * y;
    cp.rho3 = std::sin(vp.theta) * y;
    cp.rho = 2.0 * std::sqrt(static_cast<double>(vp.n_atoms)) * (vp.mu12() * cp.rho2 + vp.mu13() * cp.rho3)
             / (vp.field_freq * (1.0 + cp.rho2 * cp.rho2 + cp.rho3 * cp.rho3));
    return cp;
}

double e_min_v(const VParams& vp)
{
    validate(vp);
    if (regime(vp) == Regime::Normal)
        return vp.omega1;
    const double mu2 = vp.mu * vp.mu;
    const double d = mu2 - vp.critical_mu_sq();
    return -d * d / (vp.field_freq * mu2) + vp.omega1;
}

PhotonStats photon_stats_v(const VParams& vp)
{
    validate(vp);
    if (regime(vp) == Regime::Normal)
        return {};
    const double mu2 = vp.mu * vp.mu;
    const double c = vp.critical_mu_sq();
    const double m = vp.n_atoms * (mu2 - c) * (mu2 + c) / (vp.field_freq * vp.field_freq * mu2);
    return {m, m};
}

double nu_bar(const VParams& vp)
{
    return photon_stats_v(vp).mean;
}

namespace {

void require_default_frame(const VParams& vp)
{
    if (!vp.default_frame())
        throw InvalidInput("closed form assumes Omega = w2 = w3 = 1, w1 = 0; use the general SACS engine");
}

}  // namespace

double sacs_energy_v(const VParams& vp, ParityBranch branch)
{
    validate(vp);
    require_default_frame(vp);
    const double n = vp.n_atoms;
    if (regime(vp) == Regime::Normal)
        return branch == ParityBranch::Even ? 0.0 : 1.0 / (2.0 * n);
    const double mu = vp.mu;
    const double mu2 = mu * mu;
    const double e_coh = -std::pow(mu - 1.0 / (4.0 * mu), 2);
    const double corr = 2.0 * (mu2 - 1.0 / (16.0 * mu2));
    const double log_x = 2.0 * n * (std::log(2.0 * mu) + mu2 - 1.0 / (16.0 * mu2));
    if (branch == ParityBranch::Even)
        return e_coh + corr * std::exp(-log_x) / (1.0 + std::exp(-log_x));
    return e_coh + corr / std::expm1(log_x);
}

double odd_limit_photon_fraction(const VParams& vp)
{
    return vp.gap() / (vp.field_freq + vp.gap());
}

double photon_dist_v(const VParams& vp, Approximation approx, int nu)
{
    validate(vp);
    if (nu < 0)
        throw InvalidInput("photon number must be non-negative");
    if (regime(vp) == Regime::Normal) {
        if (approx != Approximation::Odd)
            return nu == 0 ? 1.0 : 0.0;
        const double f = odd_limit_photon_fraction(vp);
        return nu == 0 ? 1.0 - f : (nu == 1 ? f : 0.0);
    }
    const double nb = nu_bar(vp);
    const double poisson = std::exp(nu * std::log(nb) - std::lgamma(nu + 1.0) - nb);
    if (approx == Approximation::Coherent)
        return poisson;
    // ratio of the direct to the reflected atomic overlap at the minimum
    const double log_r_inv = -vp.n_atoms * std::log(vp.mu * vp.mu / vp.critical_mu_sq());
    const double s = approx == Approximation::Even ? 1.0 : -1.0;
    const double alt = nu % 2 == 0 ? 1.0 : -1.0;
    const double num = s * alt > 0 ? 1.0 + std::exp(log_r_inv) : -std::expm1(log_r_inv);
    const double log_den = log_r_inv - 2.0 * nb;
    const double den = s > 0 ? 1.0 + std::exp(log_den) : -std::expm1(log_den);
    return poisson * num / den;
}

double mandel_q_m(const VParams& vp, Approximation approx)
{
    validate(vp);
    if (regime(vp) == Regime::Normal) {
        switch (approx) {
        case Approximation::Even:
            return 1.0;
        case Approximation::Odd:
            return -1.0;
        case Approximation::Coherent:
            throw IndeterminateQ("coherent Q_M is 0/0 in the normal regime");
        }
    }
    const CoherentPoint pt = critical_point_v(vp).point();
    if (approx == Approximation::Coherent)
        return coherent_expectations(vp.to_model(), pt).mandel_q();
    const ParityBranch b = approx == Approximation::Even ? ParityBranch::Even : ParityBranch::Odd;
    return expect_m_moments(SacsPoint{pt, b, AtomicConfiguration::V, vp.n_atoms}).mandel_q();
}

std::pair<double, double> population_relations(double a11, double theta, int n_atoms)
{
    if (n_atoms < 1)
        throw InvalidInput("atom count must be at least 1");
    if (!(a11 >= 0.0 && a11 <= n_atoms))
        throw InvalidInput("a11 must lie in [0, N_a]");
    const double excited = n_atoms * (1.0 - a11 / n_atoms);
    const double c = std::cos(theta), s = std::sin(theta);
    return {excited * c * c, excited * s * s};
}

double linear_entropy_v(const VParams& vp, ParityBranch branch)
{
    validate(vp);
    require_default_frame(vp);
    if (regime(vp) == Regime::Normal)
        return branch == ParityBranch::Even ? 0.0 : 0.5;
    const double n = vp.n_atoms;
    const double mu = vp.mu;
    const double mu2 = mu * mu;
    // (1 - e^A)(1 - e^B) / [2 (1 +- e^C)^2] with A + B - 2C = N/(4 mu^2)
    const double a = n * (16.0 * mu2 * mu2 - 1.0) / (4.0 * mu2);
    const double b = 4.0 * n * std::log(2.0 * mu);
    const double c = 2.0 * n * std::log(2.0 * mu) + n * (8.0 * mu2 * mu2 - 1.0) / (4.0 * mu2);
    const double sgn = sign_of(branch);
    const double den = std::exp(-c) + sgn;
    return std::exp(n / (4.0 * mu2)) * std::expm1(-a) * std::expm1(-b) / (2.0 * den * den);
}

CoherentPoint limit_path_point(const VParams& vp, double eps)
{
    const double x = eps * std::sqrt(vp.n_atoms * vp.gap() / vp.field_freq);
    return {{x, 0.0}, {eps * std::cos(vp.theta), 0.0}, {eps * std::sin(vp.theta), 0.0}};
}

ObservableReport v_report(const VParams& vp, Approximation approx)
{
    validate(vp);
    const ModelParams p = vp.to_model();
    const CoherentPoint pt = critical_point_v(vp).point();
    if (approx == Approximation::Coherent)
        return coherent_expectations(p, pt);
    const ParityBranch b = approx == Approximation::Even ? ParityBranch::Even : ParityBranch::Odd;
    if (regime(vp) == Regime::Collective || b == ParityBranch::Even)
        return sacs_report(p, SacsPoint{pt, b, AtomicConfiguration::V, vp.n_atoms});

    // one excitation shared between the field (fraction f) and the symmetric
    // atomic state along the coupling direction
    const double f = odd_limit_photon_fraction(vp);
    const double e = 1.0 - f;
    const double c2 = std::pow(std::cos(vp.theta), 2), s2 = std::pow(std::sin(vp.theta), 2);
    ObservableReport r;
    r.energy = vp.n_atoms * vp.omega1 + vp.field_freq * vp.gap() / (vp.field_freq + vp.gap());
    r.n_photons = f;
    r.var_photons = f * e;
    r.populations = {vp.n_atoms - e, e * c2, e * s2};
    r.var_populations = {f * e, e * c2 * (1.0 - e * c2), e * s2 * (1.0 - e * s2)};
    r.m_excitations = 1.0;
    r.var_m = 0.0;
    return r;
}

double linear_entropy_at_minimum(const VParams& vp, Approximation approx)
{
    validate(vp);
    if (approx == Approximation::Coherent)
        return 0.0;
    const ParityBranch b = approx == Approximation::Even ? ParityBranch::Even : ParityBranch::Odd;
    if (regime(vp) == Regime::Normal) {
        if (b == ParityBranch::Even)
            return 0.0;
        const double f = odd_limit_photon_fraction(vp);
        return 2.0 * f * (1.0 - f);
    }
    return linear_entropy(SacsPoint{critical_point_v(vp).point(), b, AtomicConfiguration::V, vp.n_atoms});
}

}  // namespace qsacs
