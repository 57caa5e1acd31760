#include "qsacs/coherent_surface.hpp"

#include "qsacs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qsacs {

double energy_full(const ModelParams& p, const CoherentPoint& pt)
{
    const auto g = pt.gamma();
    const double norm = pt.gamma_norm2();
    const double n = p.n_atoms;

    double atomic = 0.0;
    for (int i = 0; i < 3; ++i)
        atomic += p.level_energy[i] * std::norm(g[i]);
    atomic *= n;

    const double field_quad = 2.0 * pt.alpha.real();  // alpha* + alpha
    double inter = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            inter += p.coupling(i, j) * 2.0 * (std::conj(g[i]) * g[j]).real();
    inter *= std::sqrt(n) * field_quad;

    return p.field_freq * std::norm(pt.alpha) + (atomic - inter) / norm;
}

double energy_full_polar(const ModelParams& p, const PolarPoint& pt)
{
    const double n = p.n_atoms;
    const auto& w = p.level_energy;
    const double r2 = pt.rho2 * pt.rho2, r3 = pt.rho3 * pt.rho3;
    const double bracket = p.mu12 * pt.rho2 * std::cos(pt.phi2) + p.mu13 * pt.rho3 * std::cos(pt.phi3)
                           + p.mu23 * pt.rho2 * pt.rho3 * std::cos(pt.phi2 - pt.phi3);
    const double num = n * (w[0] + w[1] * r2 + w[2] * r3)
                       - 4.0 * std::sqrt(n) * bracket * pt.rho * std::cos(pt.phi);
    return p.field_freq * pt.rho * pt.rho + num / (1.0 + r2 + r3);
}

double energy_rwa(const ModelParams& p, const CoherentPoint& pt)
{
    const auto g = pt.gamma();
    const double norm = pt.gamma_norm2();
    const double n = p.n_atoms;

    double atomic = 0.0;
    for (int i = 0; i < 3; ++i)
        atomic += p.level_energy[i] * std::norm(g[i]);
    atomic *= n;

    double inter = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            inter += p.coupling(i, j) * 2.0 * (std::conj(g[i]) * g[j] * std::conj(pt.alpha)).real();
    inter *= std::sqrt(n);

    return p.field_freq * std::norm(pt.alpha) + (atomic - inter) / norm;
}

double energy_rwa_polar(const ModelParams& p, const PolarPoint& pt)
{
    const double n = p.n_atoms;
    const auto& w = p.level_energy;
    const double r2 = pt.rho2 * pt.rho2, r3 = pt.rho3 * pt.rho3;
    const double bracket = p.mu12 * pt.rho2 * std::cos(pt.phi2 - pt.phi)
                           + p.mu13 * pt.rho3 * std::cos(pt.phi3 - pt.phi)
                           + p.mu23 * pt.rho2 * pt.rho3 * std::cos(pt.phi3 - pt.phi2 - pt.phi);
    const double num = n * (w[0] + w[1] * r2 + w[2] * r3) - 2.0 * std::sqrt(n) * pt.rho * bracket;
    return p.field_freq * pt.rho * pt.rho + num / (1.0 + r2 + r3);
}

double energy_surface(const ModelParams& p, const CoherentPoint& pt)
{
    return p.rwa ? energy_rwa(p, pt) : energy_full(p, pt);
}

namespace {

template <class T>
T radial(const ModelParams& p, T rho, T rho2, T rho3)
{
    const T n = p.n_atoms;
    const auto& w = p.level_energy;
    const T r2 = rho2 * rho2, r3 = rho3 * rho3;
    const T factor = p.rwa ? 2 : 4;
    const T bracket = T(p.mu12) * rho2 + T(p.mu13) * rho3 + T(p.mu23) * rho2 * rho3;
    const T num = n * (T(w[0]) + T(w[1]) * r2 + T(w[2]) * r3) - factor * std::sqrt(n) * rho * bracket;
    return T(p.field_freq) * rho * rho + num / (1 + r2 + r3);
}

}  // namespace

double energy_radial(const ModelParams& p, double rho, double rho2, double rho3)
{
    return radial<double>(p, rho, rho2, rho3);
}

namespace {

struct Candidate {
    std::array<double, 3> x;
    double energy;
    bool converged;
};

double min_eigenvalue(const Objective& f, const std::array<double, 3>& x, double step,
                      Eigen::Vector3d* direction = nullptr)
{
    const double h = step * std::max({1.0, std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
    const Eigen::MatrixXd hess = fd_hessian(f, std::span<const double>(x.data(), 3), h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    if (direction)
        *direction = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
}

Candidate local_search(const Objective& f, std::array<double, 3> start, const MinimizerStrategy& s)
{
    NelderMeadOptions opts = s.local;
    auto res = nelder_mead(f, {start.begin(), start.end()}, opts);
    bool converged = res.converged;

    // restart from the incumbent with a fresh simplex until it stops moving
    for (int round = 0; round < s.polish_rounds; ++round) {
        opts.initial_step = std::max(1e-3, 100.0 * s.local.xtol);
        auto again = nelder_mead(f, res.x, opts);
        double moved = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            moved = std::max(moved, std::abs(again.x[k] - res.x[k]));
        const bool improved = again.value < res.value;
        if (improved)
            res = again;
        converged = converged || again.converged;
        if (!improved || moved <= s.local.xtol)
            break;
    }

    std::array<double, 3> x{res.x[0], res.x[1], res.x[2]};
    double value = res.value;

    // a stationary point with a descent direction is a saddle: step off it
    for (int esc = 0; esc < s.saddle_escapes; ++esc) {
        Eigen::Vector3d dir;
        const double lam = min_eigenvalue(f, x, s.hessian_step, &dir);
        if (lam >= -s.local.ftol * std::max(1.0, std::abs(value)))
            break;
        Candidate best{x, value, converged};
        for (double sign : {1.0, -1.0}) {
            std::array<double, 3> y = x;
            const double step = std::max(1e-3, std::sqrt(-lam));
            for (int k = 0; k < 3; ++k)
                y[k] += sign * step * dir(k);
            auto r = nelder_mead(f, {y.begin(), y.end()}, s.local);
            if (r.value < best.energy)
                best = {{r.x[0], r.x[1], r.x[2]}, r.value, r.converged};
        }
        if (!(best.energy < value))
            break;
        x = best.x;
        value = best.energy;
        converged = best.converged;
    }
    return {x, value, converged};
}

// Polish in extended precision, anchored at the incumbent so that energy
// differences below the double resolution of E stay visible.
std::array<double, 3> refine(const ModelParams& p, std::array<double, 3> x)
{
    for (int round = 0; round < 3; ++round) {
        const long double e0 = radial<long double>(p, x[0], x[1], x[2]);
        const Objective g = [&](std::span<const double> y) {
            return static_cast<double>(radial<long double>(p, y[0], y[1], y[2]) - e0);
        };
        NelderMeadOptions o;
        o.ftol = 1e-30;
        o.xtol = 1e-13;
        o.max_iterations = 2000;
        o.initial_step = 1e-6;
        const auto r = nelder_mead(g, {x.begin(), x.end()}, o);
        if (!(r.value < 0.0))
            break;
        x = {r.x[0], r.x[1], r.x[2]};
    }
    return x;
}

bool lex_less(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

CriticalPoint minimize_surface(const ModelParams& p, const MinimizerStrategy& strategy)
{
    validate(p);
    const Objective f = [&p](std::span<const double> x) { return energy_radial(p, x[0], x[1], x[2]); };

    double rho_max = strategy.rho_max;
    if (rho_max <= 0.0)
        rho_max = std::max(4.0, 4.0 * std::sqrt(static_cast<double>(p.n_atoms)) * p.max_coupling()
                                    / p.field_freq);
    const int n = std::max(1, strategy.starts_per_axis);
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k)
        grid[k] = n == 1 ? 0.5 * rho_max : rho_max * k / (n - 1);

    std::vector<Candidate> found;
    for (double a : grid)
        for (double b : grid)
            for (double c : grid) {
                auto cand = local_search(f, {a, b, c}, strategy);
                for (double& v : cand.x)
                    v = std::abs(v);
                cand.energy = energy_radial(p, cand.x[0], cand.x[1], cand.x[2]);
                found.push_back(cand);
            }

    const double tie = 1e-12;
    auto better = [&](const Candidate& a, const Candidate& b) {
        const double scale = tie * std::max(1.0, std::abs(b.energy));
        if (a.energy < b.energy - scale)
            return true;
        if (a.energy > b.energy + scale)
            return false;
        return lex_less(a.x, b.x);
    };

    const Candidate* best_conv = nullptr;
    const Candidate* best_any = nullptr;
    for (const auto& c : found) {
        if (!best_any || better(c, *best_any))
            best_any = &c;
        if (c.converged && (!best_conv || better(c, *best_conv)))
            best_conv = &c;
    }

    Candidate pick = best_conv ? *best_conv : *best_any;
    pick.x = refine(p, pick.x);
    for (double& v : pick.x)
        v = std::abs(v);
    pick.energy = energy_radial(p, pick.x[0], pick.x[1], pick.x[2]);
    CriticalPoint cp;
    cp.rho = pick.x[0];
    cp.rho2 = pick.x[1];
    cp.rho3 = pick.x[2];
    cp.energy = pick.energy;
    cp.min_hessian_eigenvalue = min_eigenvalue(f, pick.x, strategy.hessian_step);
    cp.hessian_positive = cp.min_hessian_eigenvalue > 1e-8 * std::max(1.0, std::abs(cp.energy));

    if (!best_conv)
        throw NonConvergence("no start converged within the iteration budget", cp);
    return cp;
}

double ObservableReport::mandel_q() const
{
    if (m_excitations == 0.0)
        throw IndeterminateQ("Q_M undefined: <M> = 0");
    return var_m / m_excitations - 1.0;
}

cplx coherent_generator(const CoherentPoint& pt, int n_atoms, int j, int k)
{
    const auto g = pt.gamma();
    return static_cast<double>(n_atoms) * std::conj(g[j]) * g[k] / pt.gamma_norm2();
}

cplx coherent_generator_pair(const CoherentPoint& pt, int n_atoms, int i, int j, int k, int l)
{
    const auto g = pt.gamma();
    const double norm = pt.gamma_norm2();
    const double n = n_atoms;
    cplx v = n * (n - 1.0) * std::conj(g[i]) * g[j] * std::conj(g[k]) * g[l] / (norm * norm);
    if (j == k)
        v += n * std::conj(g[i]) * g[l] / norm;
    return v;
}

ObservableReport coherent_expectations(const ModelParams& p, const CoherentPoint& pt)
{
    const auto lam = excitation_weights(p.config);
    const int n = p.n_atoms;
    const double a2 = std::norm(pt.alpha);

    ObservableReport r;
    r.energy = energy_surface(p, pt);
    r.n_photons = a2;
    r.var_photons = a2;  // Poisson field

    for (int i = 0; i < 3; ++i) {
        r.populations[i] = coherent_generator(pt, n, i, i).real();
        r.var_populations[i] =
            coherent_generator_pair(pt, n, i, i, i, i).real() - r.populations[i] * r.populations[i];
    }

    double atomic_m = 0.0, atomic_m2 = 0.0;
    for (int i = 1; i < 3; ++i) {
        atomic_m += lam[i] * r.populations[i];
        for (int j = 1; j < 3; ++j)
            atomic_m2 += lam[i] * lam[j] * coherent_generator_pair(pt, n, i, i, j, j).real();
    }
    r.m_excitations = a2 + atomic_m;
    // field and matter factorize, so the variances add
    r.var_m = a2 + (atomic_m2 - atomic_m * atomic_m);
    return r;
}

}  // namespace qsacs
