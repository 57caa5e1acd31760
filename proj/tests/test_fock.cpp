#include "qsacs/errors.hpp"
#include "qsacs/fock.hpp"
#include "qsacs/sacs.hpp"
#include "qsacs/v_analytic.hpp"
#include "qsacs/validate.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace qsacs;

namespace {

ModelParams v_params(double mu, int n = 2)
{
    ModelParams p;
    p.mu12 = p.mu13 = mu / std::sqrt(2.0);
    p.n_atoms = n;
    return p;
}

}  // namespace

TEST_CASE("basis layout")
{
    const TruncatedSpace s(2, 3);
    CHECK(s.atomic_dimension() == 6);
    CHECK(s.dimension() == 24);
    CHECK(s.index(0, 0, 0) == 0);
    CHECK(s.index(0, 0, 1) == 1);
    CHECK(s.index(0, 1, 0) == 3);
    CHECK(s.index(1, 0, 0) == 6);
    CHECK(s.index(4, 0, 0) == -1);
    CHECK(s.index(0, 2, 1) == -1);
    for (int i = 0; i < s.dimension(); ++i) {
        const BasisIndex& b = s[i];
        CHECK(b.n1 + b.n2 + b.n3 == 2);
        CHECK(s.index(b.nu, b.n2, b.n3) == i);
    }
    CHECK_THROWS_AS(TruncatedSpace(6, 1000, 5000), DimensionOverflow);
}

TEST_CASE("Hamiltonian examples")
{
    ModelParams p;
    p.level_energy = {0.1, 0.7, 1.3};
    p.field_freq = 0.9;
    p.n_atoms = 3;
    const TruncatedSpace s(3, 6);
    const SparseMatrix h = build_hamiltonian(p, s);
    const Eigen::MatrixXd d(h);
    for (int i = 0; i < s.dimension(); ++i) {
        const BasisIndex& b = s[i];
        CHECK(d(i, i) == doctest::Approx(0.9 * b.nu + 0.1 * b.n1 + 0.7 * b.n2 + 1.3 * b.n3));
        for (int j = 0; j < s.dimension(); ++j)
            if (i != j)
                CHECK(d(i, j) == 0.0);
    }

    ModelParams one;
    one.n_atoms = 1;
    one.level_energy = {0.25, 1.0, 1.0};
    const GroundStates g = ground_states(one, TruncatedSpace(1, 5));
    CHECK(g.even.energy == doctest::Approx(0.25));

    const ModelParams q = v_params(1.3, 3);
    const SparseMatrix hq = build_hamiltonian(q, TruncatedSpace(3, 8));
    CHECK((Eigen::MatrixXd(hq) - Eigen::MatrixXd(hq).transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Casimir operators are exact matrix identities")
{
    for (int n : {1, 2, 4}) {
        const TruncatedSpace s(n, 3);
        SparseMatrix lin(s.dimension(), s.dimension()), quad(s.dimension(), s.dimension());
        for (int i = 0; i < 3; ++i) {
            lin += generator_matrix(s, i, i);
            for (int j = 0; j < 3; ++j)
                quad += SparseMatrix(generator_matrix(s, i, j) * generator_matrix(s, j, i));
        }
        const Eigen::MatrixXd l(lin), q(quad);
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(s.dimension(), s.dimension());
        CHECK((l - n * id).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((q - double(n * n + 2 * n) * id).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("parity sectors")
{
    const TruncatedSpace s(2, 10);
    const ParitySectors ps = parity_sectors(s, AtomicConfiguration::V);
    CHECK(ps.even.size() + ps.odd.size() == std::size_t(s.dimension()));
    CHECK(std::find(ps.even.begin(), ps.even.end(), s.index(0, 0, 0)) != ps.even.end());
    CHECK(std::find(ps.odd.begin(), ps.odd.end(), s.index(0, 1, 0)) != ps.odd.end());

    for (auto c : {AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}) {
        ModelParams p;
        p.config = c;
        p.level_energy = {0.0, 0.6, 1.4};
        if (c == AtomicConfiguration::V)
            p.level_energy = {0.0, 1.0, 1.0};
        if (c != AtomicConfiguration::Lambda)
            p.mu12 = 0.8;
        if (c != AtomicConfiguration::Xi)
            p.mu13 = 0.5;
        if (c != AtomicConfiguration::V)
            p.mu23 = 0.7;
        for (bool rwa : {false, true}) {
            p.rwa = rwa;
            CHECK(cross_sector_norm(build_hamiltonian(p, s), s, c) == 0.0);
        }
    }
}

TEST_CASE("RWA Hamiltonian conserves excitations")
{
    ModelParams p = v_params(1.1, 2);
    p.rwa = true;
    const TruncatedSpace s(2, 12);
    const Eigen::MatrixXd h(build_hamiltonian(p, s));
    for (int i = 0; i < s.dimension(); ++i)
        for (int j = 0; j < s.dimension(); ++j)
            if (h(i, j) != 0.0)
                CHECK(s[i].excitation({1, 1}) == s[j].excitation({1, 1}));
}

TEST_CASE("ground states")
{
    const GroundStates z = ground_states(ModelParams{});
    CHECK(z.even.energy == doctest::Approx(0.0));
    CHECK(std::abs(z.even.state[0]) == doctest::Approx(1.0));

    const GroundStates w = ground_states(v_params(0.2));
    CHECK(w.even.energy < 0.0);
    CHECK(w.delta_even < 1e-10);

    const GroundStates s = ground_states(v_params(1.0));
    CHECK(s.even.energy < -1.125);
    CHECK(s.even.energy == doctest::Approx(-1.1542805452).epsilon(1e-9));
    CHECK(s.odd.energy == doctest::Approx(-1.1310141206).epsilon(1e-9));
    CHECK(&s.global() == &s.even);

    GroundStateOptions tight;
    tight.max_dimension = 300;
    CHECK_THROWS_AS(ground_states(v_params(2.0), tight), CutoffNotConverged);
}

TEST_CASE("variational chain at nu_max 80")
{
    const ModelParams p = v_params(1.0);
    const TruncatedSpace space(2, 80);
    const GroundStates g = ground_states(p, space);
    const CoherentPoint c = critical_point_v(VParams{1.0}).point();
    const double ep = sacs_energy(p, SacsPoint{c, ParityBranch::Even, AtomicConfiguration::V, 2});
    const double em = sacs_energy(p, SacsPoint{c, ParityBranch::Odd, AtomicConfiguration::V, 2});
    CHECK(g.even.energy <= ep);
    CHECK(ep <= -1.125);
    CHECK(g.odd.energy <= em);
}

TEST_CASE("spectrum is monotone in the cutoff")
{
    const ModelParams p = v_params(1.5);
    double prev = 1e300;
    for (int nu : {10, 20, 30}) {
        const auto ev = sector_spectrum(p, TruncatedSpace(2, nu), ParityBranch::Even);
        CHECK(std::is_sorted(ev.begin(), ev.end()));
        CHECK(ev.front() <= prev + 1e-12);
        prev = ev.front();
    }
}

TEST_CASE("sacs vectors")
{
    const TruncatedSpace s(2, 30);
    const CoherentPoint atoms_only{{0.0, 0.0}, {0.4, 0.2}, {-0.3, 0.5}};
    const StateVector v = build_sacs_vector(atoms_only, ParityBranch::Even, AtomicConfiguration::V, s);
    for (int i = 0; i < s.dimension(); ++i)
        if (std::abs(v[i]) > 0)
            CHECK((s[i].nu == 0 && s[i].excitation({1, 1}) % 2 == 0));

    std::mt19937_64 rng(59);
    for (int k = 0; k < 30; ++k) {
        const CoherentPoint pt = random_point(rng);
        const int n = 1 + k % 3;
        const auto c = std::array{AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}[k % 3];
        const TruncatedSpace space(n, sacs_cutoff(pt));
        const StateVector e = build_sacs_vector(pt, ParityBranch::Even, c, space);
        const StateVector o = build_sacs_vector(pt, ParityBranch::Odd, c, space);
        const double ke = kernel(pt.alpha, pt.gamma(), pt.alpha, pt.gamma(), ParityBranch::Even, c, n).real();
        CHECK(e.squaredNorm() == doctest::Approx(ke).epsilon(1e-12));
        CHECK(std::abs(e.dot(o)) <= 1e-12 * std::sqrt(e.squaredNorm() * o.squaredNorm()));
        const SparseMatrix par = parity_matrix(space, c);
        CHECK(expect(e, par).real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(expect(o, par).real() == doctest::Approx(-1.0).epsilon(1e-14));
    }

    const CoherentPoint big{{5.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(build_sacs_vector(big, ParityBranch::Even, AtomicConfiguration::V, TruncatedSpace(1, 10)),
                    TailTooLarge);

    StateVector vac = StateVector::Zero(s.dimension());
    vac[0] = 1.0;
    CHECK(expect(vac, photon_number_matrix(s)) == cplx(0.0, 0.0));
}

TEST_CASE("unitary rotation identity for the counter-rotating part")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    const TruncatedSpace s(2, 30);
    for (auto c : {AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}) {
        ModelParams p;
        p.config = c;
        p.level_energy = {0.0, 1.0, c == AtomicConfiguration::V ? 1.0 : 2.0};
        if (c != AtomicConfiguration::Lambda)
            p.mu12 = u(rng);
        if (c != AtomicConfiguration::Xi)
            p.mu13 = u(rng);
        if (c != AtomicConfiguration::V)
            p.mu23 = u(rng);
        CHECK(rotation_identity_check(p, s, 0.0) == 0.0);
        for (double theta : {std::numbers::pi / 7, std::numbers::pi / 4, std::numbers::pi})
            CHECK(rotation_identity_check(p, s, theta) < 1e-12);
    }
}

TEST_CASE("matrix output formats")
{
    SparseMatrix m(2, 2);
    m.insert(0, 0) = 1.5;
    m.insert(1, 0) = -2.0;
    std::ostringstream os;
    write_matrix_market(os, m);
    const std::string text = os.str();
    CHECK(text.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
    CHECK(text.find("2 2 2") != std::string::npos);
    std::ostringstream ev;
    write_eigenvalues(ev, {-1.0, 0.5});
    CHECK(ev.str().find("-1.0000000000000000e+00") != std::string::npos);
}
