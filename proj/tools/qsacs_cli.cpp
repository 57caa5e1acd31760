#include "qsacs/coherent_surface.hpp"
#include "qsacs/errors.hpp"
#include "qsacs/fock.hpp"
#include "qsacs/sweep.hpp"
#include "qsacs/v_analytic.hpp"
#include "qsacs/validate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace qsacs;

namespace {

enum Exit { Ok = 0, ValidationFailed = 1, BadInput = 2, NumericalFailure = 3 };

struct Options {
    std::string out;
    std::string format = "csv";
    std::string na = "2";
    std::string mu = "0:2:201";
    std::string theta = "0.78539816339744831";
    std::string branch = "coherent,even,odd";
    std::string outputs = "energy";
    std::string configuration = "v";
    std::string scale = "linear";
    bool rwa = false;
    int nu_max = 0;
    int jobs = 1;
    double omega = 1.0, w1 = 0.0, w2 = 1.0, w3 = 1.0;
};

bool is_range(const std::string& s) { return s.find(':') != std::string::npos; }

SweepSpec make_spec(const Options& o)
{
    SweepSpec s;
    s.base.config = parse_configuration(o.configuration);
    s.base.field_freq = o.omega;
    s.base.level_energy = {o.w1, o.w2, o.w3};
    s.base.rwa = o.rwa;
    s.methods = parse_methods(o.branch);
    s.outputs = parse_outputs(o.outputs);
    s.nu_max = o.nu_max;
    s.jobs = o.jobs;

    const int ranges = is_range(o.mu) + is_range(o.theta) + is_range(o.na);
    if (ranges > 1)
        throw InvalidInput("only one of --mu, --theta, --na may be a start:stop:count range");
    const GridAxis mu = GridAxis::parse("mu", o.mu);
    const GridAxis theta = GridAxis::parse("theta", o.theta);
    const GridAxis na = GridAxis::parse("na", o.na);
    s.mu = mu.start;
    s.theta = theta.start;
    if (na.start != std::floor(na.start) || na.start < 1)
        throw InvalidInput("--na must be a positive integer");
    s.base.n_atoms = static_cast<int>(na.start);
    s.grid = is_range(o.theta) ? theta : is_range(o.na) ? na : mu;
    if (o.scale == "log")
        s.grid.log_scale = true;
    else if (o.scale != "linear")
        throw InvalidInput("--scale must be linear or log");
    return s;
}

VParams make_vparams(const SweepSpec& s)
{
    const ModelParams p = with_coupling(s.base, s.mu, s.theta);
    VParams vp = VParams::from_model(p);
    vp.theta = s.theta;
    vp.mu = s.mu;
    return vp;
}

class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw InvalidInput("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(const Options& o, const ResultTable& t)
{
    if (o.format != "csv" && o.format != "json")
        throw InvalidInput("--format must be csv or json");
    Sink sink(o.out);
    if (o.format == "json")
        write_json(sink.stream(), t);
    else
        write_csv(sink.stream(), t);
}

void base_metadata(ResultTable& t, const SweepSpec& s, const std::string& command)
{
    t.metadata = {
        {"tool", "qsacs 1.0.0"},
        {"command", command},
        {"configuration", std::string(to_string(s.base.config))},
        {"hamiltonian", s.base.rwa ? "rwa" : "full"},
        {"omega", format_number(s.base.field_freq)},
        {"w1", format_number(s.base.level_energy[0])},
        {"w2", format_number(s.base.level_energy[1])},
        {"w3", format_number(s.base.level_energy[2])},
        {"na", std::to_string(s.base.n_atoms)},
        {"mu", format_number(s.mu)},
        {"theta", format_number(s.theta)},
    };
}

int cmd_sweep(const Options& o)
{
    const SweepSpec s = make_spec(o);
    emit(o, run_sweep(s));
    return Ok;
}

int cmd_phase_boundary(const Options& o, double threshold)
{
    SweepSpec s = make_spec(o);
    if (s.grid.variable != "mu")
        throw InvalidInput("phase-boundary scans --mu start:stop:count");
    const PhaseBoundaryReport rep = find_phase_boundary(s, threshold);
    ResultTable t;
    base_metadata(t, s, "phase-boundary");
    t.metadata.push_back({"threshold", format_number(threshold)});
    t.columns = {"mu_c_numeric", "lower", "upper", "mu_c_analytic", "evaluations"};
    t.rows.push_back({rep.numeric, rep.lower, rep.upper, rep.analytic, double(rep.evaluations)});
    emit(o, t);
    return Ok;
}

int cmd_photon_dist(const Options& o, bool fit)
{
    const SweepSpec s = make_spec(o);
    if (s.grid.count != 1)
        throw InvalidInput("photon-dist takes a single parameter point");
    const VParams vp = make_vparams(s);
    std::vector<Approximation> approx;
    for (Method m : s.methods) {
        if (m == Method::Even)
            approx.push_back(Approximation::Even);
        else if (m == Method::Odd)
            approx.push_back(Approximation::Odd);
        else if (m == Method::Coherent)
            approx.push_back(Approximation::Coherent);
        else
            throw InvalidInput("photon-dist supports coherent, even and odd");
    }
    const DistributionTable d = photon_distribution(vp, approx, s.nu_max);
    ResultTable t;
    base_metadata(t, s, "photon-dist");
    t.metadata.push_back({"nu_bar", format_number(nu_bar(vp))});
    t.columns = {"nu"};
    for (Approximation a : approx)
        t.columns.push_back("P_" + std::string(to_string(a)));
    for (int nu = 0; nu <= d.nu_max(); ++nu) {
        std::vector<std::optional<double>> row{double(nu)};
        for (double p : d.probabilities[nu])
            row.push_back(p);
        t.rows.push_back(row);
    }
    for (std::size_t k = 0; k < approx.size(); ++k) {
        std::vector<double> col;
        for (const auto& r : d.probabilities)
            col.push_back(r[k]);
        const std::string name(to_string(approx[k]));
        t.metadata.push_back({"mean_" + name, format_number(distribution_mean(col))});
        if (fit) {
            const GaussianFit g = fit_gaussian(col);
            if (!g.converged)
                throw std::runtime_error("gaussian fit did not converge for " + name);
            t.metadata.push_back({"fit_mean_" + name, format_number(g.mean)});
            t.metadata.push_back({"fit_sigma_" + name, format_number(g.sigma)});
            std::cerr << "gaussian fit " << name << ": mean " << format_number(g.mean) << " sigma "
                      << format_number(g.sigma) << '\n';
        }
    }
    emit(o, t);
    return Ok;
}

int cmd_spectrum(const Options& o, const std::string& matrix_path)
{
    const SweepSpec s = make_spec(o);
    if (s.grid.count != 1)
        throw InvalidInput("spectrum takes a single parameter point");
    const ModelParams p = with_coupling(s.base, s.mu, s.theta);
    validate(p);
    const int nu_max = s.nu_max > 0 ? s.nu_max : ground_states(p).nu_max;
    const TruncatedSpace space(p.n_atoms, nu_max, GroundStateOptions{}.max_dimension);
    ResultTable t;
    base_metadata(t, s, "spectrum");
    t.metadata.push_back({"nu_max", std::to_string(nu_max)});
    t.columns = {"parity", "index", "energy"};
    for (ParityBranch b : {ParityBranch::Even, ParityBranch::Odd}) {
        const auto ev = sector_spectrum(p, space, b);
        for (std::size_t k = 0; k < ev.size(); ++k)
            t.rows.push_back({double(sign_of(b)), double(k), ev[k]});
    }
    emit(o, t);
    if (!matrix_path.empty()) {
        std::ofstream mf(matrix_path);
        if (!mf)
            throw InvalidInput("cannot open matrix file '" + matrix_path + "'");
        write_matrix_market(mf, build_hamiltonian(p, space));
    }
    return Ok;
}

int cmd_validate(const std::string& level, const std::string& inject, std::uint64_t seed, const Options& o)
{
    ValidationLevel lv;
    if (level == "fast")
        lv = ValidationLevel::Fast;
    else if (level == "full")
        lv = ValidationLevel::Full;
    else
        throw InvalidInput("--level must be fast or full");
    const ValidationReport rep = run_validation(lv, parse_mutant(inject), seed);
    Sink sink(o.out);
    print_report(sink.stream(), rep);
    return rep.all_passed() ? Ok : ValidationFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherent-state and parity-adapted variational analysis of three-level atoms in a cavity"};
    app.set_config("--config", "", "Flat key=value file mirroring the flags; flags override it");
    app.require_subcommand(1);

    Options o;
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--format", o.format, "csv or json")->capture_default_str();
    app.add_option("--na", o.na, "Atom count, or start:stop:count")->capture_default_str();
    app.add_option("--mu", o.mu, "Coupling magnitude, or start:stop:count")->capture_default_str();
    app.add_option("--theta", o.theta, "Coupling mixing angle in rad, or start:stop:count")->capture_default_str();
    app.add_option("--branch", o.branch, "Comma list of coherent, even, odd, exact, exact-even, exact-odd, all")
        ->capture_default_str();
    app.add_option("--outputs", o.outputs, "Comma list of energy, photons, populations, m, q, entropy, all")
        ->capture_default_str();
    app.add_option("--configuration", o.configuration, "xi, lambda or v")->capture_default_str();
    app.add_option("--scale", o.scale, "Grid spacing: linear or log")->capture_default_str();
    app.add_flag("--rwa", o.rwa, "Rotating-wave Hamiltonian");
    app.add_option("--nu-max", o.nu_max, "Photon cutoff (0 = automatic)")->capture_default_str();
    app.add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
    app.add_option("--omega", o.omega, "Field frequency")->capture_default_str();
    app.add_option("--w1", o.w1, "Level 1 energy")->capture_default_str();
    app.add_option("--w2", o.w2, "Level 2 energy")->capture_default_str();
    app.add_option("--w3", o.w3, "Level 3 energy")->capture_default_str();

    auto* sweep = app.add_subcommand(
        "sweep", "Tabulate energy per atom, photon statistics, populations, M moments, Q_M and linear entropy "
                 "over a coupling grid for the coherent, even/odd parity-adapted and exact ground states "
                 "(data behind the energy, photon, population, Q_M and entropy versus coupling curves)");
    auto* pb = app.add_subcommand(
        "phase-boundary", "Bisect the coupling where the coherent minimum leaves the origin (normal/collective "
                          "transition); prints the analytic value for V in double resonance");
    double threshold = 1e-6;
    pb->add_option("--threshold", threshold, "Order-parameter threshold on rho_c")->capture_default_str();
    auto* pd = app.add_subcommand(
        "photon-dist", "Photon-number distribution at the V minima for the coherent and parity-adapted states "
                       "(data behind the photon distribution bar charts and their gaussian envelope)");
    bool fit = false;
    pd->add_flag("--fit", fit, "Fit a normalized gaussian and report mean and sigma");
    auto* sp = app.add_subcommand("spectrum", "Exact eigenvalues per parity sector from the truncated Fock space");
    std::string matrix_path;
    sp->add_option("--matrix", matrix_path, "Also write H in matrix market format");
    auto* va = app.add_subcommand("validate", "Run the invariant and oracle-equivalence suites");
    std::string level = "fast", inject = "none";
    std::uint64_t seed = 20240611;
    va->add_option("--level", level, "fast or full")->capture_default_str();
    va->add_option("--inject", inject, "Mutant to inject: none, field-radius-no-factor2, m2-gamma2")
        ->capture_default_str();
    va->add_option("--seed", seed, "Random seed")->capture_default_str();

    for (auto* sub : {sweep, pb, pd, sp, va})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (*sweep)
            return cmd_sweep(o);
        if (*pb)
            return cmd_phase_boundary(o, threshold);
        if (*pd)
            return cmd_photon_dist(o, fit);
        if (*sp)
            return cmd_spectrum(o, matrix_path);
        if (*va)
            return cmd_validate(level, inject, seed, o);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return BadInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return NumericalFailure;
    }
    return Ok;
}
