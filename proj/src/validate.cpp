#include "qsacs/validate.hpp"

#include "qsacs/coherent_surface.hpp"
#include "qsacs/errors.hpp"
#include "qsacs/fock.hpp"
#include "qsacs/v_analytic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qsacs {

Mutant parse_mutant(std::string_view s)
{
    if (s.empty() || s == "none")
        return Mutant::None;
    if (s == "field-radius-no-factor2")
        return Mutant::FieldRadiusNoFactor2;
    if (s == "m2-gamma2")
        return Mutant::SecondMomentGamma2;
    throw InvalidInput("unknown mutant '" + std::string(s) + "'");
}

bool ValidationReport::all_passed() const
{
    for (const auto& c : checks)
        if (!c.informational && !c.passed)
            return false;
    return true;
}

double relative_deviation(cplx x, cplx y)
{
    return std::abs(x - y) / std::max(std::abs(y), 1.0);
}

double OracleDeviation::max() const
{
    return std::max({kernel, one_body, two_body, generators, generator_pairs, interaction, m_moments, density_matrix});
}

CoherentPoint random_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tau = 2.0 * std::numbers::pi;
    const double ra = 3.0 * unit(rng), pa = tau * unit(rng);
    const double r2 = 2.0 * unit(rng), p2 = tau * unit(rng);
    const double r3 = 2.0 * unit(rng), p3 = tau * unit(rng);
    return CoherentPoint::from_polar(ra, pa, r2, p2, r3, p3);
}

namespace {

// The lambda_3 photon cross term evaluated with |gamma_2|^2 instead of
// |gamma_3|^2; returns the change this makes to the normalized <M^2>.
double second_moment_mutation(const SacsPoint& sp)
{
    const auto w = excitation_weights(sp.config);
    const double a = std::norm(sp.point.alpha);
    const double g = sp.point.gamma_norm2();
    double s_odd = 0.0;
    if (w.lambda2 % 2)
        s_odd += std::norm(sp.point.gamma2);
    if (w.lambda3 % 2)
        s_odd += std::norm(sp.point.gamma3);
    const double r = (g - 2.0 * s_odd) / g;
    const int n = sp.n_atoms;
    const double sigma = sign_of(sp.branch);
    const double par3 = w.lambda3 % 2 ? -1.0 : 1.0;
    const double d1 = 1.0 / g;
    const double c1 = std::exp(-2.0 * a) * std::pow(r, n - 1) / g;
    const double k = 2.0 * (1.0 + sigma * std::exp(-2.0 * a) * std::pow(r, n));
    return 4.0 * n * w.lambda3 * a * (std::norm(sp.point.gamma2) - std::norm(sp.point.gamma3))
           * (d1 - sigma * par3 * c1) / k;
}

}  // namespace

OracleDeviation compare_with_oracle(const SacsPoint& sp, const CoherentPoint& other, Mutant mutant)
{
    const int cutoff = std::max(sacs_cutoff(sp.point), sacs_cutoff(other));
    const TruncatedSpace space(sp.n_atoms, cutoff);
    const StateVector v = build_sacs_vector(sp.point, sp.branch, sp.config, space);
    const StateVector u = build_sacs_vector(other, sp.branch, sp.config, space);
    const double nrm = v.squaredNorm();
    OracleDeviation d;

    // kernel on the diagonal (scaled) and between two points
    const Scaled<double> ns = norm_squared(sp);
    d.kernel = relative_deviation(nrm * std::exp(-ns.log_scale), ns.value);
    const cplx kk = kernel(other.alpha, other.gamma(), sp.point.alpha, sp.point.gamma(), sp.branch, sp.config,
                           sp.n_atoms);
    const cplx overlap = u.dot(v);
    // nearly orthogonal pairs are measured against the Cauchy-Schwarz bound
    const double scale = std::max({std::abs(kk), 1.0, 1e-6 * std::sqrt(nrm * u.squaredNorm())});
    d.kernel = std::max(d.kernel, std::abs(overlap - kk) / scale);

    // A_kl psi for all k, l
    std::array<std::array<StateVector, 3>, 3> av;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            av[k][l] = generator_matrix(space, k, l).cast<cplx>() * v;
    const SparseMatrix a = annihilation_matrix(space);
    const StateVector av_a = a.cast<cplx>() * v;
    const SparseMatrix n_op = photon_number_matrix(space);
    const StateVector nv = n_op.cast<cplx>() * v;

    const OneBody ob = expect_one_body(sp);
    const TwoBody tb = expect_two_body(sp);
    for (int i = 0; i < 3; ++i) {
        d.one_body = std::max(d.one_body, relative_deviation(v.dot(av[i][i]) / nrm, ob.populations[i]));
        d.two_body = std::max(d.two_body, relative_deviation(av[i][i].squaredNorm() / nrm, tb.populations_sq[i]));
    }
    d.one_body = std::max(d.one_body, relative_deviation(v.dot(nv) / nrm, ob.photons));
    d.two_body = std::max(d.two_body, relative_deviation(nv.squaredNorm() / nrm, tb.photons_sq));

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            d.generators = std::max(d.generators, relative_deviation(v.dot(av[i][j]) / nrm, expect_generator(sp, i, j)));
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    d.generator_pairs = std::max(
                        d.generator_pairs,
                        relative_deviation(av[j][i].dot(av[k][l]) / nrm, expect_generator_pair(sp, i, j, k, l)));
        }

    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const InteractionTerms it = expect_interaction(sp, i, j);
            const StateVector aij_a = generator_matrix(space, i, j).cast<cplx>() * av_a;
            const StateVector aji_a = generator_matrix(space, j, i).cast<cplx>() * av_a;
            const SparseMatrix x = a + SparseMatrix(a.transpose());
            const SparseMatrix dip = SparseMatrix(generator_matrix(space, i, j) + generator_matrix(space, j, i)) * x;
            d.interaction = std::max({d.interaction, relative_deviation(v.dot(aij_a) / nrm, it.a_ij_a),
                                      relative_deviation(v.dot(aji_a) / nrm, it.a_ji_a),
                                      relative_deviation(expect(v, dip), it.dipole)});
        }

    MMoments mm = expect_m_moments(sp);
    if (mutant == Mutant::SecondMomentGamma2)
        mm.second += second_moment_mutation(sp);
    const SparseMatrix m_op = excitation_matrix(space, sp.config);
    const StateVector mv = m_op.cast<cplx>() * v;
    d.m_moments = std::max(relative_deviation(v.dot(mv) / nrm, mm.mean),
                           relative_deviation(mv.squaredNorm() / nrm, mm.second));

    const Eigen::MatrixXcd rho = partial_trace_field(v, space);
    d.density_matrix = (rho - reduced_density_matrix(sp).rho).cwiseAbs().maxCoeff();
    return d;
}

namespace {

constexpr std::array<AtomicConfiguration, 3> kConfigs{AtomicConfiguration::Xi, AtomicConfiguration::Lambda,
                                                      AtomicConfiguration::V};

struct Recorder {
    ValidationReport& rep;

    CheckResult& add(std::string name, double deviation, double tolerance, std::string detail = {})
    {
        CheckResult c;
        c.name = std::move(name);
        c.deviation = deviation;
        c.tolerance = tolerance;
        c.passed = deviation <= tolerance && std::isfinite(deviation);
        c.detail = std::move(detail);
        rep.checks.push_back(c);
        return rep.checks.back();
    }

    void info(std::string name, std::string detail)
    {
        CheckResult c;
        c.name = std::move(name);
        c.informational = true;
        c.detail = std::move(detail);
        rep.checks.push_back(c);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

ModelParams random_params(std::mt19937_64& rng, AtomicConfiguration cfg, int n)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ModelParams p;
    p.config = cfg;
    p.n_atoms = n;
    p.field_freq = 0.5 + unit(rng);
    const double w2 = unit(rng), w3 = w2 + unit(rng);
    p.level_energy = {0.0, w2, w3};
    p.mu12 = 1.5 * unit(rng);
    p.mu13 = 1.5 * unit(rng);
    p.mu23 = 1.5 * unit(rng);
    switch (cfg) {
    case AtomicConfiguration::Xi:
        p.mu13 = 0.0;
        break;
    case AtomicConfiguration::Lambda:
        p.mu12 = 0.0;
        break;
    case AtomicConfiguration::V:
        p.mu23 = 0.0;
        break;
    }
    return p;
}

void model_checks(Recorder& r, std::mt19937_64& rng, int points)
{
    double inv = 0.0;
    for (int k = 0; k < points; ++k) {
        const CoherentPoint pt = random_point(rng);
        for (auto cfg : kConfigs) {
            const CoherentPoint back = tilde_gamma(cfg, tilde_gamma(cfg, pt));
            inv = std::max({inv, std::abs(back.alpha - pt.alpha), std::abs(back.gamma2 - pt.gamma2),
                            std::abs(back.gamma3 - pt.gamma3)});
        }
    }
    r.add("tilde_gamma involution", inv, 0.0);

    const auto xi = excitation_weights(AtomicConfiguration::Xi);
    const auto la = excitation_weights(AtomicConfiguration::Lambda);
    const auto v = excitation_weights(AtomicConfiguration::V);
    const bool ok = xi.lambda2 == 1 && xi.lambda3 == 2 && la.lambda2 == 0 && la.lambda3 == 1 && v.lambda2 == 1
                    && v.lambda3 == 1;
    r.add("excitation weights", ok ? 0.0 : 1.0, 0.0);

    ModelParams p;
    p.mu12 = 0.3;
    p.mu13 = 0.7;
    const ModelParams q = rwa_coupling_map(p);
    const double dev = std::abs(q.mu12 - 0.6) + std::abs(q.mu13 - 1.4) + std::abs(q.mu23) + (q.rwa ? 0.0 : 1.0)
                       + std::abs(q.field_freq - p.field_freq) + (q.n_atoms == p.n_atoms ? 0.0 : 1.0);
    r.add("rwa coupling map", dev, 0.0);

    ModelParams b;
    b.mu12 = 0.5;  // mu^2 = Omega w3 / 4 exactly
    ModelParams c = b;
    c.mu12 = c.mu13 = std::sqrt(0.5);
    const bool regimes = regime_v(b) == Regime::Normal && regime_v(c) == Regime::Collective
                         && regime_v(ModelParams{}) == Regime::Normal;
    r.add("regime classification", regimes ? 0.0 : 1.0, 0.0, "boundary mu^2 = 1/4 is normal");
}

void surface_checks(Recorder& r, std::mt19937_64& rng, int points)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tau = 2.0 * std::numbers::pi;
    double polar = 0.0, rwa_map = 0.0, angle = 0.0;
    for (int k = 0; k < points; ++k) {
        for (auto cfg : kConfigs) {
            ModelParams p = random_params(rng, cfg, 1 + k % 6);
            const PolarPoint pp{2 * unit(rng), tau * unit(rng), 2 * unit(rng), tau * unit(rng), 2 * unit(rng),
                                tau * unit(rng)};
            const double ef = energy_full(p, pp.to_complex());
            polar = std::max(polar, relative_deviation(energy_full_polar(p, pp), ef));
            ModelParams pr = p;
            pr.rwa = true;
            polar = std::max(polar, relative_deviation(energy_rwa_polar(pr, pp), energy_rwa(pr, pp.to_complex())));

            const double radial = energy_radial(p, pp.rho, pp.rho2, pp.rho3);
            const double radial_rwa = energy_radial(rwa_coupling_map(p), pp.rho, pp.rho2, pp.rho3);
            rwa_map = std::max(rwa_map, relative_deviation(radial_rwa, radial));
            // random phases never beat the eliminated-angle surface
            angle = std::max(angle, radial - ef);
            angle = std::max(angle, energy_radial(pr, pp.rho, pp.rho2, pp.rho3) - energy_rwa(pr, pp.to_complex()));
        }
    }
    r.add("polar/complex energy agreement", polar, 1e-12);
    r.add("rwa map on the radial surface", rwa_map, 1e-12);
    r.add("angle elimination lower bound", std::max(angle, 0.0), 1e-12);

    // unconstrained six-variable search never goes below the radial minimum
    double gap = 0.0, perturb = 0.0;
    const int sets = std::max(3, points / 10);
    for (int k = 0; k < sets; ++k) {
        for (auto cfg : kConfigs) {
            ModelParams p = random_params(rng, cfg, 1 + k % 3);
            p.rwa = k % 2 == 1;
            const CriticalPoint cp = minimize_surface(p);
            const Objective f = [&](std::span<const double> x) {
                return energy_surface(p, CoherentPoint::from_polar(x[0], x[1], x[2], x[3], x[4], x[5]));
            };
            double best = std::numeric_limits<double>::infinity();
            for (int s = 0; s < 4; ++s) {
                std::vector<double> x0{1.0 + s, tau * unit(rng), 0.5 + 0.3 * s, tau * unit(rng), 0.5, tau * unit(rng)};
                best = std::min(best, nelder_mead(f, x0).value);
            }
            gap = std::max(gap, (cp.energy - best) / std::max(1.0, std::abs(cp.energy)));
            if (cp.hessian_positive) {
                for (int axis = 0; axis < 3; ++axis)
                    for (double h : {-1e-4, 1e-4}) {
                        double x[3]{cp.rho, cp.rho2, cp.rho3};
                        x[axis] += h;
                        perturb = std::max(perturb, cp.energy - energy_radial(p, x[0], x[1], x[2]));
                    }
            }
        }
    }
    r.add("unconstrained search not below radial minimum", std::max(gap, 0.0), 1e-9);
    r.add("hessian-positive minima are local minima", std::max(perturb, 0.0), 1e-12);

    double casimir = 0.0;
    for (int k = 0; k < points; ++k) {
        const CoherentPoint pt = random_point(rng);
        const int n = 1 + k % 8;
        cplx lin = 0.0, quad = 0.0;
        for (int i = 0; i < 3; ++i) {
            lin += coherent_generator(pt, n, i, i);
            for (int j = 0; j < 3; ++j)
                quad += coherent_generator_pair(pt, n, i, j, j, i);
        }
        casimir = std::max({casimir, relative_deviation(lin, double(n)), relative_deviation(quad, double(n * n + 2 * n))});
    }
    r.add("coherent Casimir invariants", casimir, 1e-10);
}

void sacs_checks(Recorder& r, std::mt19937_64& rng, int points, int max_atoms, Mutant mutant)
{
    const std::vector<int> sizes = max_atoms <= 2 ? std::vector<int>{1, 2} : std::vector<int>{1, 2, 4, 6};
    OracleDeviation worst;
    double casimir = 0.0, decomposition = 0.0, ordering = 0.0, assembly = 0.0, rdm = 0.0;
    int evaluated = 0;
    for (int k = 0; k < points; ++k) {
        const int n = sizes[k % sizes.size()];
        const auto cfg = kConfigs[(k / sizes.size()) % 3];
        const CoherentPoint pt = random_point(rng);
        const CoherentPoint other = random_point(rng);
        for (ParityBranch b : {ParityBranch::Even, ParityBranch::Odd}) {
            const SacsPoint sp{pt, b, cfg, n};
            try {
                const OracleDeviation d = compare_with_oracle(sp, other, mutant);
                worst.kernel = std::max(worst.kernel, d.kernel);
                worst.one_body = std::max(worst.one_body, d.one_body);
                worst.two_body = std::max(worst.two_body, d.two_body);
                worst.generators = std::max(worst.generators, d.generators);
                worst.generator_pairs = std::max(worst.generator_pairs, d.generator_pairs);
                worst.interaction = std::max(worst.interaction, d.interaction);
                worst.m_moments = std::max(worst.m_moments, d.m_moments);
                worst.density_matrix = std::max(worst.density_matrix, d.density_matrix);
                ++evaluated;
            } catch (const DegenerateState&) {
                continue;
            }

            cplx lin = 0.0, quad = 0.0;
            for (int i = 0; i < 3; ++i) {
                lin += expect_generator(sp, i, i);
                for (int j = 0; j < 3; ++j)
                    quad += expect_generator_pair(sp, i, j, j, i);
            }
            casimir = std::max({casimir, relative_deviation(lin, double(n)), relative_deviation(quad, double(n * n + 2 * n))});

            // M assembled from one- and two-body pieces
            const auto w = excitation_weights(cfg);
            const OneBody ob = expect_one_body(sp);
            const TwoBody tb = expect_two_body(sp);
            MMoments mm = expect_m_moments(sp);
            if (mutant == Mutant::SecondMomentGamma2)
                mm.second += second_moment_mutation(sp);
            const double mean = ob.photons + w.lambda2 * ob.populations[1] + w.lambda3 * ob.populations[2];
            const double second = tb.photons_sq + w.lambda2 * w.lambda2 * tb.populations_sq[1]
                                  + w.lambda3 * w.lambda3 * tb.populations_sq[2]
                                  + 2.0 * w.lambda2 * w.lambda3 * expect_generator_pair(sp, 1, 1, 2, 2).real()
                                  + 2.0 * w.lambda2 * expect_photon_population(sp, 1)
                                  + 2.0 * w.lambda3 * expect_photon_population(sp, 2);
            assembly = std::max({assembly, relative_deviation(mean, mm.mean), relative_deviation(second, mm.second)});

            const ReducedDensityMatrix rd = reduced_density_matrix(sp);
            const Eigen::MatrixXcd& rho = rd.rho;
            double dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
            dev = std::max(dev, std::abs(rho.trace() - 1.0));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
            dev = std::max(dev, -es.eigenvalues().minCoeff());
            for (int n2 = 0; n2 <= n; ++n2)
                for (int n3 = 0; n2 + n3 <= n; ++n3)
                    for (int m2 = 0; m2 <= n; ++m2)
                        for (int m3 = 0; m2 + m3 <= n; ++m3)
                            if ((w.lambda2 * (n2 + m2) + w.lambda3 * (n3 + m3)) % 2)
                                dev = std::max(dev, std::abs(rho(ReducedDensityMatrix::index(n2, n3, n),
                                                                 ReducedDensityMatrix::index(m2, m3, n))));
            rdm = std::max(rdm, dev);
        }

        // parity decomposition of the coherent energy
        ModelParams p = random_params(rng, cfg, n);
        p.rwa = k % 2 == 1;
        try {
            const SacsPoint se{pt, ParityBranch::Even, cfg, n};
            const SacsPoint so{pt, ParityBranch::Odd, cfg, n};
            const auto wts = parity_weights(pt, cfg, n);
            const double ee = sacs_energy(p, se), eo = sacs_energy(p, so);
            const double ec = energy_surface(p, pt);
            decomposition = std::max(decomposition, relative_deviation(wts[0] * ee + wts[1] * eo, ec));
            ordering = std::max({ordering, std::min(ee, eo) - ec, ec - std::max(ee, eo)});
        } catch (const DegenerateState&) {
        }
    }
    r.add("oracle: kernel", worst.kernel, 1e-10);
    r.add("oracle: one-body", worst.one_body, 1e-10);
    r.add("oracle: two-body", worst.two_body, 1e-10);
    r.add("oracle: generators", worst.generators, 1e-10);
    r.add("oracle: generator pairs", worst.generator_pairs, 1e-10);
    r.add("oracle: interaction", worst.interaction, 1e-10);
    r.add("oracle: M moments", worst.m_moments, 1e-10);
    r.add("oracle: reduced density matrix", worst.density_matrix, 1e-10,
          fmt("%.0f state vectors", evaluated));
    r.add("SACS Casimir invariants", casimir, 1e-10);
    r.add("M assembly identity", assembly, 1e-10);
    r.add("density matrix invariants", rdm, 1e-10);
    r.add("parity decomposition", decomposition, 1e-10);
    r.add("convex ordering", std::max(ordering, 0.0), 1e-10);
}

void fock_checks(Recorder& r, int max_atoms)
{
    double herm = 0.0, block = 0.0, commute = 0.0, casimir = 0.0, rotation = 0.0;
    for (int n = 1; n <= max_atoms; ++n)
        for (auto cfg : kConfigs) {
            std::mt19937_64 rng(n * 7 + static_cast<int>(cfg));
            ModelParams p = random_params(rng, cfg, n);
            const TruncatedSpace space(n, 20);
            for (bool rwa : {false, true}) {
                p.rwa = rwa;
                const SparseMatrix h = build_hamiltonian(p, space);
                herm = std::max(herm, SparseMatrix(h - SparseMatrix(h.transpose())).coeffs().cwiseAbs().maxCoeff());
                block = std::max(block, cross_sector_norm(h, space, cfg));
                if (rwa) {
                    const SparseMatrix m = excitation_matrix(space, cfg);
                    const SparseMatrix c = h * m - m * h;
                    if (c.nonZeros() > 0)
                        commute = std::max(commute, c.coeffs().cwiseAbs().maxCoeff());
                }
            }
            SparseMatrix lin(space.dimension(), space.dimension()), quad(space.dimension(), space.dimension());
            for (int i = 0; i < 3; ++i) {
                lin += generator_matrix(space, i, i);
                for (int j = 0; j < 3; ++j)
                    quad += generator_matrix(space, i, j) * generator_matrix(space, j, i);
            }
            Eigen::MatrixXd dl = Eigen::MatrixXd(lin);
            Eigen::MatrixXd dq = Eigen::MatrixXd(quad);
            dl -= n * Eigen::MatrixXd::Identity(dl.rows(), dl.cols());
            dq -= (n * n + 2.0 * n) * Eigen::MatrixXd::Identity(dq.rows(), dq.cols());
            casimir = std::max({casimir, dl.cwiseAbs().maxCoeff(), dq.cwiseAbs().maxCoeff()});
            for (double th : {0.0, std::numbers::pi / 7, std::numbers::pi / 4, std::numbers::pi})
                rotation = std::max(rotation, rotation_identity_check(p, space, th));
        }
    r.add("oracle H hermitian", herm, 1e-14);
    r.add("oracle H parity blocks", block, 0.0);
    r.add("oracle RWA H commutes with M", commute, 1e-12);
    r.add("oracle Casimir matrices", casimir, 1e-10);
    r.add("unitary rotation identity", rotation, 1e-12);
}

void v_checks(Recorder& r, Mutant mutant)
{
    double ratio_dev = 0.0, worst_ratio = 1.0, minimizer = 0.0, dist = 0.0;
    for (double mu : {0.6, 0.8, 1.0, 1.5, 2.0, 3.0}) {
        for (double theta : {0.0, 0.3, std::numbers::pi / 4, 1.2}) {
            VParams vp;
            vp.mu = mu;
            vp.theta = theta;
            double rho = critical_point_v(vp).rho;
            if (mutant == Mutant::FieldRadiusNoFactor2)
                rho /= 2.0;
            const double ratio = photon_stats_v(vp).mean / (rho * rho);
            if (std::abs(ratio - 1.0) > ratio_dev) {
                ratio_dev = std::abs(ratio - 1.0);
                worst_ratio = ratio;
            }
            const CriticalPoint cp = minimize_surface(vp.to_model());
            const VCritical vc = critical_point_v(vp);
            minimizer = std::max({minimizer, std::abs(cp.rho - vc.rho), std::abs(cp.rho2 - vc.rho2),
                                  std::abs(cp.rho3 - vc.rho3), std::abs(cp.energy / vp.n_atoms - e_min_v(vp))});
            for (Approximation a : {Approximation::Even, Approximation::Odd, Approximation::Coherent}) {
                double s = 0.0;
                for (int nu = 0; nu < 400; ++nu)
                    s += photon_dist_v(vp, a, nu);
                dist = std::max(dist, std::abs(s - 1.0));
            }
        }
    }
    r.add("photon mean equals rho_c^2", ratio_dev, 1e-12, fmt("worst ratio %.6g", worst_ratio));
    r.add("closed-form minima match the minimizer", minimizer, 1e-8);
    r.add("photon distributions normalized", dist, 1e-10);

    VParams lo, hi;
    lo.mu = 0.5 - 1e-7;
    hi.mu = 0.5 + 1e-7;
    r.add("E_min continuous at the boundary", std::abs(e_min_v(hi) - e_min_v(lo)), 1e-12);

    // informational closed-form discrepancy reports
    VParams v1;
    v1.mu = 1.0;
    const double sl_e = linear_entropy_at_minimum(v1, Approximation::Even);
    const double sl_o = linear_entropy_at_minimum(v1, Approximation::Odd);
    r.info("closed-form S_L vs direct trace (mu=1)",
           fmt("closed form even %.6f odd %.6f; direct even %.6f odd %.6f", linear_entropy_v(v1, ParityBranch::Even),
               linear_entropy_v(v1, ParityBranch::Odd), sl_e, sl_o));
    const double ee = v_report(v1, Approximation::Even).energy / v1.n_atoms;
    const double eo = v_report(v1, Approximation::Odd).energy / v1.n_atoms;
    r.info("closed-form E+- vs direct (mu=1)",
           fmt("closed form even %.6f odd %.6f; direct even %.6f odd %.6f", sacs_energy_v(v1, ParityBranch::Even),
               sacs_energy_v(v1, ParityBranch::Odd), ee, eo));
    r.info("coherent Q_M (mu=1)", fmt("Q_M = %.6f, not Poissonian", mandel_q_m(v1, Approximation::Coherent)));
}

}  // namespace

ValidationReport run_validation(ValidationLevel level, Mutant mutant, std::uint64_t seed)
{
    ValidationReport rep;
    Recorder r{rep};
    std::mt19937_64 rng(seed);
    const bool fast = level == ValidationLevel::Fast;
    const int points = fast ? 50 : 500;
    const int max_atoms = fast ? 2 : 6;
    model_checks(r, rng, points);
    surface_checks(r, rng, fast ? 50 : 200);
    sacs_checks(r, rng, points, max_atoms, mutant);
    fock_checks(r, max_atoms);
    v_checks(r, mutant);
    return rep;
}

void print_report(std::ostream& os, const ValidationReport& r)
{
    char buf[512];
    for (const auto& c : r.checks) {
        if (c.informational)
            std::snprintf(buf, sizeof buf, "INFO  %-48s %s\n", c.name.c_str(), c.detail.c_str());
        else
            std::snprintf(buf, sizeof buf, "%s  %-48s dev %.3e tol %.1e%s%s\n", c.passed ? "PASS" : "FAIL",
                          c.name.c_str(), c.deviation, c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
        os << buf;
    }
    os << (r.all_passed() ? "all checks passed\n" : "validation FAILED\n");
}

}  // namespace qsacs
