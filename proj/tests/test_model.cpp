#include "qsacs/errors.hpp"
#include "qsacs/model.hpp"
#include "qsacs/validate.hpp"

#include <doctest.h>

using namespace qsacs;

TEST_CASE("excitation weights per configuration")
{
    CHECK(excitation_weights(AtomicConfiguration::Xi).lambda2 == 1);
    CHECK(excitation_weights(AtomicConfiguration::Xi).lambda3 == 2);
    CHECK(excitation_weights(AtomicConfiguration::Lambda).lambda2 == 0);
    CHECK(excitation_weights(AtomicConfiguration::Lambda).lambda3 == 1);
    CHECK(excitation_weights(AtomicConfiguration::V).lambda2 == 1);
    CHECK(excitation_weights(AtomicConfiguration::V).lambda3 == 1);
    for (auto c : {AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}) {
        const auto w = excitation_weights(c);
        CHECK(w[0] == 0);
        CHECK(w.lambda2 >= 0);
        CHECK(w.lambda3 <= 2);
    }
}

TEST_CASE("tilde_gamma")
{
    const CoherentPoint p{{0.3, -0.2}, {0.5, 0.1}, {-0.7, 0.4}};
    const auto v = tilde_gamma(AtomicConfiguration::V, p);
    CHECK(v.alpha == p.alpha);
    CHECK(v.gamma2 == -p.gamma2);
    CHECK(v.gamma3 == -p.gamma3);

    const auto l = tilde_gamma(AtomicConfiguration::Lambda, p);
    CHECK(l.gamma2 == p.gamma2);
    CHECK(l.gamma3 == -p.gamma3);

    const auto x = tilde_gamma(AtomicConfiguration::Xi, p);
    CHECK(x.gamma2 == -p.gamma2);
    CHECK(x.gamma3 == p.gamma3);

    const CoherentPoint fixed{{1.2, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    for (auto c : {AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}) {
        const auto f = tilde_gamma(c, fixed);
        CHECK(f.alpha == fixed.alpha);
        CHECK(f.gamma2 == fixed.gamma2);
        CHECK(f.gamma3 == fixed.gamma3);
    }
}

TEST_CASE("tilde_gamma is an involution")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        const CoherentPoint p = random_point(rng);
        for (auto c : {AtomicConfiguration::Xi, AtomicConfiguration::Lambda, AtomicConfiguration::V}) {
            const auto b = tilde_gamma(c, tilde_gamma(c, p));
            CHECK(b.alpha == p.alpha);
            CHECK(b.gamma2 == p.gamma2);
            CHECK(b.gamma3 == p.gamma3);
        }
    }
}

TEST_CASE("regime_v")
{
    ModelParams p;
    CHECK(regime_v(p) == Regime::Normal);
    p.mu12 = 1.0;
    CHECK(regime_v(p) == Regime::Collective);
    p.mu12 = 0.5;
    CHECK(regime_v(p) == Regime::Normal);  // boundary
    p.mu12 = 0.6;
    p.mu13 = 0.8;
    CHECK(regime_v(p) == Regime::Collective);

    ModelParams xi;
    xi.config = AtomicConfiguration::Xi;
    CHECK_THROWS_AS(regime_v(xi), InvalidInput);
    ModelParams off;
    off.level_energy = {0.0, 0.8, 1.0};
    CHECK_THROWS_AS(regime_v(off), InvalidInput);
}

TEST_CASE("rwa_coupling_map")
{
    ModelParams p;
    p.mu12 = 0.3;
    const ModelParams q = rwa_coupling_map(p);
    CHECK(q.mu12 == 0.6);
    CHECK(q.rwa);
    CHECK(q.field_freq == p.field_freq);
    CHECK(q.level_energy == p.level_energy);
    CHECK(q.n_atoms == p.n_atoms);

    const ModelParams z = rwa_coupling_map(ModelParams{});
    CHECK(z.mu12 == 0.0);
    CHECK(z.mu13 == 0.0);
    CHECK(z.mu23 == 0.0);

    // the full boundary 0.5 maps to 1.0 in RWA form
    ModelParams b;
    b.mu12 = 0.5;
    CHECK(rwa_coupling_map(b).mu12 == 1.0);
}

TEST_CASE("ModelParams validation")
{
    ModelParams p;
    CHECK_NOTHROW(validate(p));
    p.field_freq = 0.0;
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p = {};
    p.level_energy = {0.0, 1.0, 0.5};
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p = {};
    p.mu12 = -0.1;
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p = {};
    p.n_atoms = 0;
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p = {};
    p.mu23 = 0.2;  // forbidden in V
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p.config = AtomicConfiguration::Xi;
    CHECK_NOTHROW(validate(p));
    p.mu13 = 0.1;
    CHECK_THROWS_AS(validate(p), InvalidInput);
    p = {};
    p.config = AtomicConfiguration::Lambda;
    p.mu12 = 0.1;
    CHECK_THROWS_AS(validate(p), InvalidInput);
}

TEST_CASE("configuration names")
{
    CHECK(parse_configuration("xi") == AtomicConfiguration::Xi);
    CHECK(parse_configuration("Lambda") == AtomicConfiguration::Lambda);
    CHECK(parse_configuration("V") == AtomicConfiguration::V);
    CHECK_THROWS_AS(parse_configuration("w"), InvalidInput);
    CHECK(to_string(ParityBranch::Odd) == "odd");
}

TEST_CASE("polar construction")
{
    const auto p = CoherentPoint::from_polar(2.0, 0.5, 0.3, -1.0, 0.4, 2.0);
    CHECK(std::abs(p.alpha) == doctest::Approx(2.0));
    CHECK(std::arg(p.gamma2) == doctest::Approx(-1.0));
    CHECK(p.gamma_norm2() == doctest::Approx(1.25));
}
