#include "qsacs/errors.hpp"
#include "qsacs/sweep.hpp"
#include "qsacs/v_analytic.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace qsacs;

namespace {

int column(const ResultTable& t, const std::string& name)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name)
            return static_cast<int>(i);
    FAIL("missing column " << name);
    return -1;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(QSACS_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("grid axis parsing")
{
    const GridAxis a = GridAxis::parse("mu", "0:2:201");
    CHECK(a.count == 201);
    const auto v = a.values();
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 2.0);
    CHECK(v[100] == 1.0);
    const GridAxis single = GridAxis::parse("mu", "0.7");
    CHECK(single.values() == std::vector<double>{0.7});
    GridAxis lg = GridAxis::parse("mu", "0.01:1:3");
    lg.log_scale = true;
    CHECK(lg.values()[1] == doctest::Approx(0.1));
    CHECK_THROWS_AS(GridAxis::parse("mu", "1:2"), InvalidInput);
    CHECK_THROWS_AS(GridAxis::parse("mu", "a:b:c"), InvalidInput);
    CHECK_THROWS_AS(GridAxis::parse("mu", "0:1:0"), InvalidInput);
}

TEST_CASE("method and output lists")
{
    const auto m = parse_methods("coherent,exact");
    CHECK(m == std::vector<Method>{Method::Coherent, Method::ExactEven, Method::ExactOdd});
    CHECK(parse_methods("all").size() == 5);
    CHECK_THROWS_AS(parse_methods("bogus"), InvalidInput);
    CHECK(parse_outputs("energy,q").size() == 2);
    CHECK_THROWS_AS(parse_outputs("nope"), InvalidInput);
}

TEST_CASE("coupling split per configuration")
{
    ModelParams b;
    const double t = 0.3;
    const ModelParams v = with_coupling(b, 2.0, t);
    CHECK(v.mu12 == doctest::Approx(2 * std::cos(t)));
    CHECK(v.mu13 == doctest::Approx(2 * std::sin(t)));
    CHECK(v.mu23 == 0.0);
    b.config = AtomicConfiguration::Xi;
    const ModelParams x = with_coupling(b, 2.0, t);
    CHECK(x.mu13 == 0.0);
    CHECK(x.mu23 == doctest::Approx(2 * std::sin(t)));
    b.config = AtomicConfiguration::Lambda;
    const ModelParams l = with_coupling(b, 2.0, t);
    CHECK(l.mu12 == 0.0);
    CHECK(l.mu13 == doctest::Approx(2 * std::cos(t)));
}

TEST_CASE("energy sweep reads the closed form at mu = 1")
{
    SweepSpec s;
    s.grid = GridAxis::parse("mu", "0:2:201");
    const ResultTable t = run_sweep(s);
    REQUIRE(t.rows.size() == 201);
    const int c = column(t, "coherent_energy");
    CHECK(t.rows[100][0].value() == 1.0);
    CHECK(*t.rows[100][c] == doctest::Approx(-0.5625).epsilon(1e-10));
    CHECK(*t.rows[20][column(t, "even_energy")] == 0.0);
    CHECK(*t.rows[20][column(t, "odd_energy")] == doctest::Approx(0.25));
    for (const auto& row : t.rows) {
        const double e = *row[column(t, "even_energy")], o = *row[column(t, "odd_energy")];
        CHECK(e <= *row[c] + 1e-12);
        CHECK(o >= *row[c] - 1e-12);
    }
}

TEST_CASE("NA sentinel and exact columns")
{
    SweepSpec s;
    s.grid = GridAxis::parse("mu", "0.3:1:2");
    s.methods = parse_methods("coherent,even,exact");
    s.outputs = parse_outputs("energy,q,entropy");
    const ResultTable t = run_sweep(s);
    CHECK_FALSE(t.rows[0][column(t, "coherent_q")].has_value());
    CHECK(*t.rows[0][column(t, "even_q")] == 1.0);
    CHECK(*t.rows[1][column(t, "coherent_q")] == doctest::Approx(-3.0 / 28.0));
    CHECK(*t.rows[1][column(t, "exact_even_energy")] == doctest::Approx(-1.1542805452 / 2).epsilon(1e-9));
    CHECK(*t.rows[1][column(t, "coherent_sl")] == 0.0);

    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str().find("NA") != std::string::npos);
    CHECK(os.str().rfind("# ", 0) == 0);

    std::ostringstream js;
    write_json(js, t);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["rows"][0][column(t, "coherent_q")].is_null());
}

TEST_CASE("sweeps are deterministic across thread counts")
{
    SweepSpec s;
    s.grid = GridAxis::parse("mu", "0:2.5:41");
    s.outputs = parse_outputs("all");
    std::ostringstream a, b;
    write_csv(a, run_sweep(s));
    s.jobs = 4;
    write_csv(b, run_sweep(s));
    CHECK(a.str() == b.str());
}

TEST_CASE("general configurations use the numeric minimizer")
{
    SweepSpec s;
    s.base.config = AtomicConfiguration::Xi;
    s.base.level_energy = {0.0, 1.0, 2.0};
    s.grid = GridAxis::parse("mu", "0:2:5");
    s.outputs = parse_outputs("energy,photons,populations");
    const ResultTable t = run_sweep(s);
    for (const auto& row : t.rows) {
        const double e = *row[column(t, "even_energy")], c = *row[column(t, "coherent_energy")];
        CHECK(e <= c + 1e-12);
        const double pops = *row[column(t, "coherent_a11")] + *row[column(t, "coherent_a22")] + *row[column(t, "coherent_a33")];
        CHECK(pops == doctest::Approx(2.0));
    }
}

TEST_CASE("invalid sweep specs are rejected")
{
    SweepSpec s;
    s.grid = GridAxis::parse("mu", "-1:1:3");
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);
    s = {};
    s.jobs = 0;
    CHECK_THROWS_AS(validate(s), InvalidInput);
    s = {};
    s.base.n_atoms = 0;
    CHECK_THROWS_AS(validate(s), InvalidInput);
}

TEST_CASE("phase boundary")
{
    SweepSpec s;
    s.grid = GridAxis::parse("mu", "0:2:41");
    const PhaseBoundaryReport r = find_phase_boundary(s);
    CHECK(std::abs(r.numeric - 0.5) <= 1e-6);
    REQUIRE(r.analytic.has_value());
    CHECK(*r.analytic == doctest::Approx(0.5));

    s.base.rwa = true;
    const PhaseBoundaryReport w = find_phase_boundary(s);
    CHECK(std::abs(w.numeric - 1.0) <= 1e-6);

    SweepSpec none;
    none.grid = GridAxis::parse("mu", "0:0.4:21");
    CHECK_THROWS_AS(find_phase_boundary(none), NoTransitionFound);
}

TEST_CASE("photon distributions")
{
    VParams vp;
    vp.mu = 3.0;
    const DistributionTable t =
        photon_distribution(vp, {Approximation::Even, Approximation::Odd, Approximation::Coherent});
    for (int a = 0; a < 3; ++a) {
        std::vector<double> col;
        double sum = 0.0;
        for (const auto& row : t.probabilities) {
            col.push_back(row[a]);
            sum += row[a];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-10);
        CHECK(std::abs(distribution_mean(col) - nu_bar(vp)) <= 1e-10);
        const GaussianFit f = fit_gaussian(col);
        CHECK(f.converged);
        CHECK(std::abs(f.mean / 17.74 - 1) < 0.02);
        CHECK(std::abs(f.sigma / 4.23 - 1) < 0.03);
    }

    VParams normal;
    normal.mu = 0.3;
    const DistributionTable n = photon_distribution(normal, {Approximation::Even});
    CHECK(n.nu_max() == 0);
    CHECK(n.probabilities[0][0] == 1.0);
}

TEST_CASE("number formatting")
{
    CHECK(format_number(-0.5625) == "-5.6250000000000000e-01");
    CHECK(format_number(1.0 / 3.0) == "3.3333333333333331e-01");
}

TEST_CASE("command-line exit codes")
{
    CHECK(run_cli("validate --level fast") == 0);
    CHECK(run_cli("validate --level fast --inject field-radius-no-factor2") == 1);
    CHECK(run_cli("validate --level fast --inject m2-gamma2") == 1);
    CHECK(run_cli("sweep --mu -1") == 2);
    CHECK(run_cli("sweep --format xml") == 2);
    CHECK(run_cli("--bogus-flag") == 2);
    CHECK(run_cli("phase-boundary --mu 0:0.4:21") == 3);
}

TEST_CASE("command-line output files and config")
{
    const auto dir = std::filesystem::temp_directory_path() / "qsacs_cli_test";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.csv", b = dir / "b.csv", cfg = dir / "run.ini", c = dir / "c.csv";

    REQUIRE(run_cli("sweep --mu 0:2:21 --branch all --jobs 2 --out " + a.string()) == 0);
    REQUIRE(run_cli("sweep --mu 0:2:21 --branch all --jobs 1 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("coherent_energy") != std::string::npos);

    {
        std::ofstream f(cfg);
        f << "mu = 0:2:11\nbranch = coherent\nna = 3\n";
    }
    REQUIRE(run_cli("--config " + cfg.string() + " sweep --na 4 --out " + c.string()) == 0);
    const std::string text = slurp(c);
    CHECK(text.find("# na: 4") != std::string::npos);
    CHECK(text.find("even_energy") == std::string::npos);

    const auto j = dir / "d.json";
    REQUIRE(run_cli("photon-dist --mu 3 --fit --format json --out " + j.string()) == 0);
    const auto parsed = nlohmann::json::parse(slurp(j));
    CHECK(parsed.contains("rows"));

    const auto spec = dir / "s.txt";
    REQUIRE(run_cli("spectrum --mu 1 --nu-max 20 --out " + spec.string()) == 0);
    CHECK(!slurp(spec).empty());
    std::filesystem::remove_all(dir);
}
