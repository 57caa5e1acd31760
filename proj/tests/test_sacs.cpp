#include "qsacs/coherent_surface.hpp"
#include "qsacs/errors.hpp"
#include "qsacs/fock.hpp"
#include "qsacs/sacs.hpp"
#include "qsacs/v_analytic.hpp"
#include "qsacs/validate.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qsacs;

namespace {

const AtomicConfiguration configs[] = {AtomicConfiguration::Xi, AtomicConfiguration::Lambda,
                                       AtomicConfiguration::V};

SacsPoint vacuum(ParityBranch b, int n = 2)
{
    return SacsPoint{CoherentPoint{}, b, AtomicConfiguration::V, n};
}

ModelParams v_params(double mu, int n = 2)
{
    ModelParams p;
    p.mu12 = p.mu13 = mu / std::sqrt(2.0);
    p.n_atoms = n;
    return p;
}

}  // namespace

TEST_CASE("kernel examples")
{
    const std::array<cplx, 3> g{1.0, 0.0, 0.0};
    CHECK(kernel(0.0, g, 0.0, g, ParityBranch::Even, AtomicConfiguration::V, 2) == cplx(4.0, 0.0));
    CHECK(kernel(0.0, g, 0.0, g, ParityBranch::Odd, AtomicConfiguration::V, 2) == cplx(0.0, 0.0));
    CHECK(norm_squared(vacuum(ParityBranch::Even)).unscaled() == doctest::Approx(4.0));
    CHECK(norm_squared(vacuum(ParityBranch::Odd)).unscaled() == 0.0);
}

TEST_CASE("kernel is hermitian and matches the vector overlap")
{
    std::mt19937_64 rng(23);
    for (auto c : configs) {
        for (int n : {1, 3}) {
            const CoherentPoint x = random_point(rng), y = random_point(rng);
            for (auto b : {ParityBranch::Even, ParityBranch::Odd}) {
                const cplx kxy = kernel(x.alpha, x.gamma(), y.alpha, y.gamma(), b, c, n);
                const cplx kyx = kernel(y.alpha, y.gamma(), x.alpha, x.gamma(), b, c, n);
                CHECK(std::abs(kxy - std::conj(kyx)) <= 1e-10 * std::max(1.0, std::abs(kxy)));
                const TruncatedSpace space(n, std::max(sacs_cutoff(x), sacs_cutoff(y)));
                const cplx ov = build_sacs_vector(x, b, c, space).dot(build_sacs_vector(y, b, c, space));
                CHECK(std::abs(ov - kxy) <= 1e-10 * std::max({1.0, std::abs(kxy)}));
            }
        }
    }
}

TEST_CASE("one-body examples")
{
    const OneBody ob = expect_one_body(vacuum(ParityBranch::Even, 3));
    CHECK(ob.populations[0] == doctest::Approx(3.0));
    CHECK(ob.populations[1] == 0.0);
    CHECK(ob.populations[2] == 0.0);
    CHECK(ob.photons == 0.0);
    CHECK_THROWS_AS(expect_one_body(vacuum(ParityBranch::Odd)), DegenerateState);
    CHECK_THROWS_AS(expect_m_moments(vacuum(ParityBranch::Odd)), DegenerateState);
    CHECK_THROWS_AS(sacs_energy(v_params(1.0), vacuum(ParityBranch::Odd)), DegenerateState);

    const SacsPoint sp{{{1.0, 0.0}, {0.5, 0.0}, {0.5, 0.0}}, ParityBranch::Even, AtomicConfiguration::V, 2};
    const TruncatedSpace space(2, sacs_cutoff(sp.point));
    const StateVector psi = build_sacs_vector(sp.point, sp.branch, sp.config, space);
    const OneBody e = expect_one_body(sp);
    for (int i = 0; i < 3; ++i)
        CHECK(relative_deviation(e.populations[i], expect(psi, generator_matrix(space, i, i)).real()) <= 1e-10);
    CHECK(relative_deviation(e.photons, expect(psi, photon_number_matrix(space)).real()) <= 1e-10);
}

TEST_CASE("Casimir identities on random points")
{
    std::mt19937_64 rng(29);
    for (int k = 0; k < 300; ++k) {
        const int n = 1 + k % 6;
        const SacsPoint sp{random_point(rng), k % 2 ? ParityBranch::Odd : ParityBranch::Even, configs[k % 3], n};
        const OneBody ob = expect_one_body(sp);
        CHECK(relative_deviation(ob.populations[0] + ob.populations[1] + ob.populations[2], double(n)) <= 1e-10);
        cplx quad = 0.0, lin = 0.0;
        for (int i = 0; i < 3; ++i) {
            lin += expect_generator(sp, i, i);
            for (int j = 0; j < 3; ++j)
                quad += expect_generator_pair(sp, i, j, j, i);
        }
        CHECK(relative_deviation(lin, double(n)) <= 1e-10);
        CHECK(relative_deviation(quad, double(n * n + 2 * n)) <= 1e-10);
    }
}

TEST_CASE("two-body and interaction examples")
{
    const TwoBody tb = expect_two_body(vacuum(ParityBranch::Even, 3));
    CHECK(tb.populations_sq[0] == doctest::Approx(9.0));

    std::mt19937_64 rng(31);
    for (int k = 0; k < 50; ++k) {
        const CoherentPoint pt = random_point(rng);
        for (auto b : {ParityBranch::Even, ParityBranch::Odd}) {
            const InteractionTerms v = expect_interaction(SacsPoint{pt, b, AtomicConfiguration::V, 2}, 1, 2);
            CHECK(v.a_ij_a == cplx(0.0, 0.0));
            CHECK(v.a_ji_a == cplx(0.0, 0.0));
            CHECK(v.dipole == 0.0);
            const InteractionTerms l = expect_interaction(SacsPoint{pt, b, AtomicConfiguration::Lambda, 2}, 0, 1);
            CHECK(l.a_ij_a == cplx(0.0, 0.0));
            CHECK(l.dipole == 0.0);
        }
    }
}

TEST_CASE("closed forms match the state-vector oracle")
{
    std::mt19937_64 rng(37);
    for (int k = 0; k < 60; ++k) {
        const int n = std::array{1, 2, 4}[k % 3];
        const SacsPoint sp{random_point(rng), k % 2 ? ParityBranch::Odd : ParityBranch::Even, configs[(k / 2) % 3], n};
        const OracleDeviation d = compare_with_oracle(sp, random_point(rng));
        CHECK(d.max() <= 1e-10);
    }
}

TEST_CASE("M moments")
{
    CHECK(expect_m_moments(vacuum(ParityBranch::Even)).mean == 0.0);
    CHECK_THROWS_AS(expect_m_moments(vacuum(ParityBranch::Even)).mandel_q(), IndeterminateQ);

    VParams vp;
    vp.mu = 0.3;
    double prev = 0.0;
    for (double eps : {1e-3, 1e-4}) {
        const SacsPoint odd{limit_path_point(vp, eps), ParityBranch::Odd, AtomicConfiguration::V, 2};
        const SacsPoint even{limit_path_point(vp, eps), ParityBranch::Even, AtomicConfiguration::V, 2};
        const double qo = expect_m_moments(odd).mandel_q();
        const double qe = expect_m_moments(even).mandel_q();
        CHECK(std::abs(qo + 1.0) < 1e-2);
        CHECK(std::abs(qe - 1.0) < 1e-2);
        if (prev != 0.0)
            CHECK(std::abs(qo + 1.0) < std::abs(prev + 1.0));
        prev = qo;
    }

    std::mt19937_64 rng(41);
    for (int k = 0; k < 100; ++k) {
        const SacsPoint sp{random_point(rng), k % 2 ? ParityBranch::Odd : ParityBranch::Even, configs[k % 3], 1 + k % 5};
        const MMoments m = expect_m_moments(sp);
        CHECK(m.variance >= -1e-10 * std::max(1.0, m.second));
    }
}

TEST_CASE("sacs energy examples and parity decomposition")
{
    CHECK(sacs_energy(v_params(1.0), vacuum(ParityBranch::Even)) == 0.0);

    const VCritical c = critical_point_v(VParams{1.0});
    const ModelParams p = v_params(1.0);
    const double ee = sacs_energy(p, SacsPoint{c.point(), ParityBranch::Even, AtomicConfiguration::V, 2});
    const double eo = sacs_energy(p, SacsPoint{c.point(), ParityBranch::Odd, AtomicConfiguration::V, 2});
    const double ec = energy_full(p, c.point());
    CHECK(ec == doctest::Approx(-1.125));
    CHECK(ee < ec);
    CHECK(ec < eo);
    CHECK(ee / 2 == doctest::Approx(-0.565252).epsilon(1e-6));
    CHECK(eo / 2 == doctest::Approx(-0.559740).epsilon(1e-6));

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.5);
    for (int k = 0; k < 200; ++k) {
        ModelParams q;
        q.config = configs[k % 3];
        q.n_atoms = 1 + k % 6;
        q.rwa = (k / 3) % 2 == 1;
        q.level_energy = {0.0, 0.5 + u(rng), 2.0 + u(rng)};
        if (q.config != AtomicConfiguration::Lambda)
            q.mu12 = u(rng);
        if (q.config != AtomicConfiguration::Xi)
            q.mu13 = u(rng);
        if (q.config != AtomicConfiguration::V)
            q.mu23 = u(rng);
        const CoherentPoint pt = random_point(rng);
        const auto w = parity_weights(pt, q.config, q.n_atoms);
        CHECK(w[0] + w[1] == doctest::Approx(1.0));
        const double ep = sacs_energy(q, SacsPoint{pt, ParityBranch::Even, q.config, q.n_atoms});
        const double em = sacs_energy(q, SacsPoint{pt, ParityBranch::Odd, q.config, q.n_atoms});
        const double coh = energy_surface(q, pt);
        CHECK(relative_deviation(w[0] * ep + w[1] * em, coh) <= 1e-10);
        CHECK(std::min(ep, em) <= coh + 1e-10 * std::max(1.0, std::abs(coh)));
        CHECK(std::max(ep, em) >= coh - 1e-10 * std::max(1.0, std::abs(coh)));
    }
}

TEST_CASE("sacs energy matches the oracle Hamiltonian")
{
    std::mt19937_64 rng(47);
    for (int k = 0; k < 24; ++k) {
        ModelParams q = v_params(0.9, 1 + k % 3);
        q.rwa = k % 2 == 1;
        const SacsPoint sp{random_point(rng), (k / 2) % 2 ? ParityBranch::Odd : ParityBranch::Even,
                           AtomicConfiguration::V, q.n_atoms};
        const TruncatedSpace space(q.n_atoms, sacs_cutoff(sp.point));
        const StateVector psi = build_sacs_vector(sp.point, sp.branch, sp.config, space);
        CHECK(relative_deviation(sacs_energy(q, sp), expect(psi, build_hamiltonian(q, space)).real()) <= 1e-10);
    }
}

TEST_CASE("reduced density matrix and linear entropy")
{
    const ReducedDensityMatrix v = reduced_density_matrix(vacuum(ParityBranch::Even));
    const int d = ReducedDensityMatrix::dimension(2);
    CHECK(v.rho.rows() == d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            CHECK(std::abs(v.rho(r, c) - cplx(r == 0 && c == 0 ? 1.0 : 0.0)) <= 1e-15);
    CHECK(linear_entropy(vacuum(ParityBranch::Even)) == doctest::Approx(0.0));

    std::mt19937_64 rng(53);
    for (int k = 0; k < 60; ++k) {
        const int n = 1 + k % 4;
        const SacsPoint sp{random_point(rng), k % 2 ? ParityBranch::Odd : ParityBranch::Even, configs[k % 3], n};
        const ReducedDensityMatrix r = reduced_density_matrix(sp);
        CHECK(std::abs(r.rho.trace() - 1.0) <= 1e-12);
        CHECK((r.rho - r.rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        const double s = linear_entropy(r);
        const double dim = ReducedDensityMatrix::dimension(n);
        CHECK(s >= -1e-12);
        CHECK(s <= 1.0 - 1.0 / dim + 1e-12);

        const TruncatedSpace space(n, sacs_cutoff(sp.point));
        const StateVector psi = build_sacs_vector(sp.point, sp.branch, sp.config, space);
        const Eigen::MatrixXcd oracle = partial_trace_field(psi, space);
        for (int n2 = 0; n2 <= n; ++n2)
            for (int n3 = 0; n2 + n3 <= n; ++n3)
                for (int m2 = 0; m2 <= n; ++m2)
                    for (int m3 = 0; m2 + m3 <= n; ++m3) {
                        const cplx a = r.rho(ReducedDensityMatrix::index(n2, n3, n), ReducedDensityMatrix::index(m2, m3, n));
                        const cplx b = oracle(space.atomic_index(n2, n3), space.atomic_index(m2, m3));
                        CHECK(std::abs(a - b) <= 1e-10);
                    }
    }
}

TEST_CASE("large coordinates stay finite")
{
    const SacsPoint sp{{{14.0, 3.0}, {1.5, -0.2}, {-0.3, 2.0}}, ParityBranch::Odd, AtomicConfiguration::Xi, 40};
    const OneBody ob = expect_one_body(sp);
    CHECK(std::isfinite(ob.photons));
    CHECK(ob.photons == doctest::Approx(std::norm(sp.point.alpha)).epsilon(1e-10));
    CHECK(std::isfinite(norm_squared(sp).log_scale));
    CHECK(std::isfinite(expect_m_moments(sp).variance));
    CHECK(std::isfinite(sacs_energy(v_params(2.0, 40), SacsPoint{sp.point, sp.branch, AtomicConfiguration::V, 40})));
}

TEST_CASE("sacs minimization lowers the even energy")
{
    const ModelParams p = v_params(1.0);
    const CriticalPoint coh = minimize_surface(p);
    const CriticalPoint even = minimize_sacs_energy(p, ParityBranch::Even, coh);
    const double at_coh = sacs_energy(p, SacsPoint{coh.point(), ParityBranch::Even, AtomicConfiguration::V, 2});
    CHECK(even.energy <= at_coh + 1e-12);
}
