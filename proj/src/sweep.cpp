#include "qsacs/sweep.hpp"

#include "qsacs/coherent_surface.hpp"
#include "qsacs/errors.hpp"
#include "qsacs/fock.hpp"
#include "qsacs/sacs.hpp"

#include <json.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qsacs {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Coherent:
        return "coherent";
    case Method::Even:
        return "even";
    case Method::Odd:
        return "odd";
    case Method::ExactEven:
        return "exact_even";
    case Method::ExactOdd:
        return "exact_odd";
    }
    return "?";
}

std::string_view to_string(Output o)
{
    switch (o) {
    case Output::Energy:
        return "energy";
    case Output::Photons:
        return "photons";
    case Output::Populations:
        return "populations";
    case Output::MMoments:
        return "m";
    case Output::Q:
        return "q";
    case Output::Entropy:
        return "entropy";
    }
    return "?";
}

namespace {

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        std::string item(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos));
        if (!item.empty())
            out.push_back(item);
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return out;
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a number: '" + s + "'");
    }
    if (used != s.size())
        throw InvalidInput("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<Method> parse_methods(std::string_view list)
{
    std::vector<Method> out;
    auto add = [&](Method m) {
        if (std::find(out.begin(), out.end(), m) == out.end())
            out.push_back(m);
    };
    for (const auto& item : split(list, ',')) {
        if (item == "coherent")
            add(Method::Coherent);
        else if (item == "even" || item == "sacs-even")
            add(Method::Even);
        else if (item == "odd" || item == "sacs-odd")
            add(Method::Odd);
        else if (item == "exact") {
            add(Method::ExactEven);
            add(Method::ExactOdd);
        } else if (item == "exact-even")
            add(Method::ExactEven);
        else if (item == "exact-odd")
            add(Method::ExactOdd);
        else if (item == "all") {
            for (Method m : {Method::Coherent, Method::Even, Method::Odd, Method::ExactEven, Method::ExactOdd})
                add(m);
        } else
            throw InvalidInput("unknown approximation '" + item + "'");
    }
    if (out.empty())
        throw InvalidInput("no approximation requested");
    return out;
}

std::vector<Output> parse_outputs(std::string_view list)
{
    std::vector<Output> out;
    for (const auto& item : split(list, ',')) {
        Output o;
        if (item == "energy")
            o = Output::Energy;
        else if (item == "photons")
            o = Output::Photons;
        else if (item == "populations")
            o = Output::Populations;
        else if (item == "m")
            o = Output::MMoments;
        else if (item == "q")
            o = Output::Q;
        else if (item == "entropy")
            o = Output::Entropy;
        else if (item == "all") {
            out = {Output::Energy, Output::Photons, Output::Populations, Output::MMoments, Output::Q, Output::Entropy};
            continue;
        } else
            throw InvalidInput("unknown output '" + item + "'");
        if (std::find(out.begin(), out.end(), o) == out.end())
            out.push_back(o);
    }
    if (out.empty())
        throw InvalidInput("no output requested");
    return out;
}

std::vector<double> GridAxis::values() const
{
    if (count < 1)
        throw InvalidInput("grid count must be at least 1");
    if (log_scale && !(start > 0.0 && stop > 0.0))
        throw InvalidInput("log grid needs positive bounds");
    std::vector<double> v(count);
    for (int k = 0; k < count; ++k) {
        const double s = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        v[k] = log_scale ? std::exp(std::log(start) + s * (std::log(stop) - std::log(start)))
                         : start + s * (stop - start);
    }
    if (count > 1)
        v.back() = stop;
    return v;
}

GridAxis GridAxis::parse(std::string_view variable, std::string_view spec)
{
    const auto parts = split(spec, ':');
    GridAxis g;
    g.variable = std::string(variable);
    if (parts.size() == 1) {
        g.start = g.stop = parse_double(parts[0]);
        g.count = 1;
    } else if (parts.size() == 3) {
        g.start = parse_double(parts[0]);
        g.stop = parse_double(parts[1]);
        const double c = parse_double(parts[2]);
        if (c != std::floor(c) || c < 1)
            throw InvalidInput("grid count must be a positive integer");
        g.count = static_cast<int>(c);
    } else {
        throw InvalidInput("grid must be 'value' or 'start:stop:count'");
    }
    return g;
}

ModelParams with_coupling(const ModelParams& base, double mu, double theta)
{
    ModelParams p = base;
    const double a = mu * std::cos(theta), b = mu * std::sin(theta);
    p.mu12 = p.mu13 = p.mu23 = 0.0;
    switch (p.config) {
    case AtomicConfiguration::V:
        p.mu12 = a;
        p.mu13 = b;
        break;
    case AtomicConfiguration::Xi:
        p.mu12 = a;
        p.mu23 = b;
        break;
    case AtomicConfiguration::Lambda:
        p.mu13 = a;
        p.mu23 = b;
        break;
    }
    return p;
}

void validate(const SweepSpec& spec)
{
    if (spec.grid.variable != "mu" && spec.grid.variable != "theta" && spec.grid.variable != "na")
        throw InvalidInput("grid variable must be mu, theta or na");
    const auto values = spec.grid.values();
    if (spec.jobs < 1)
        throw InvalidInput("jobs must be at least 1");
    if (spec.nu_max < 0)
        throw InvalidInput("photon cutoff must be non-negative");
    if (spec.methods.empty() || spec.outputs.empty())
        throw InvalidInput("nothing to compute");
    for (double v : values) {
        double mu = spec.mu, theta = spec.theta;
        ModelParams base = spec.base;
        if (spec.grid.variable == "mu")
            mu = v;
        else if (spec.grid.variable == "theta")
            theta = v;
        else {
            if (v != std::floor(v) || v < 1)
                throw InvalidInput("atom-count grid must hold positive integers");
            base.n_atoms = static_cast<int>(v);
        }
        if (!(mu >= 0.0) || !std::isfinite(mu))
            throw InvalidInput("mu must be finite and non-negative");
        if (!(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-15))
            throw InvalidInput("theta must lie in [0, pi/2]");
        validate(with_coupling(base, mu, theta));
    }
}

namespace {

bool v_closed_forms_apply(const ModelParams& p)
{
    return p.config == AtomicConfiguration::V && p.level_energy[1] == p.level_energy[2] && !p.rwa;
}

struct Values {
    std::optional<double> energy, n, var_n, q, m, var_m, sl;
    std::array<std::optional<double>, 3> pops;
};

Values from_report(const ObservableReport& r, int n_atoms)
{
    Values v;
    v.energy = r.energy / n_atoms;
    v.n = r.n_photons;
    v.var_n = r.var_photons;
    for (int i = 0; i < 3; ++i)
        v.pops[i] = r.populations[i];
    v.m = r.m_excitations;
    v.var_m = r.var_m;
    try {
        v.q = r.mandel_q();
    } catch (const IndeterminateQ&) {
    }
    return v;
}

Values evaluate_variational(const ModelParams& p, double mu, double theta, Method method)
{
    if (v_closed_forms_apply(p)) {
        VParams vp;
        vp.mu = mu;
        vp.theta = theta;
        vp.field_freq = p.field_freq;
        vp.omega3 = p.level_energy[2];
        vp.omega1 = p.level_energy[0];
        vp.n_atoms = p.n_atoms;
        const Approximation a = method == Method::Coherent ? Approximation::Coherent
                                : method == Method::Even   ? Approximation::Even
                                                           : Approximation::Odd;
        Values v = from_report(v_report(vp, a), p.n_atoms);
        v.q.reset();
        try {
            v.q = mandel_q_m(vp, a);
        } catch (const IndeterminateQ&) {
        }
        v.sl = linear_entropy_at_minimum(vp, a);
        return v;
    }

    const CriticalPoint cp = minimize_surface(p);
    const CoherentPoint pt = cp.point();
    if (method == Method::Coherent) {
        Values v = from_report(coherent_expectations(p, pt), p.n_atoms);
        v.sl = 0.0;
        return v;
    }
    const SacsPoint sp{pt, method == Method::Even ? ParityBranch::Even : ParityBranch::Odd, p.config, p.n_atoms};
    try {
        Values v = from_report(sacs_report(p, sp), p.n_atoms);
        v.sl = linear_entropy(sp);
        return v;
    } catch (const DegenerateState&) {
        return {};
    }
}

Values evaluate_exact(const ModelParams& p, const GroundStates& gs, const TruncatedSpace& space, Method method)
{
    const Eigenpair& e = gs[method == Method::ExactEven ? ParityBranch::Even : ParityBranch::Odd];
    const SparseMatrix n = photon_number_matrix(space);
    const SparseMatrix m = excitation_matrix(space, p.config);
    Values v;
    v.energy = e.energy / p.n_atoms;
    const double nn = expect(e.state, n).real();
    v.n = nn;
    v.var_n = std::max(0.0, expect(e.state, n * n).real() - nn * nn);
    for (int i = 0; i < 3; ++i)
        v.pops[i] = expect(e.state, generator_matrix(space, i, i)).real();
    const double mm = expect(e.state, m).real();
    v.m = mm;
    v.var_m = std::max(0.0, expect(e.state, m * m).real() - mm * mm);
    if (mm != 0.0)
        v.q = *v.var_m / mm - 1.0;
    const Eigen::MatrixXcd rho = partial_trace_field(e.state, space);
    v.sl = 1.0 - rho.cwiseAbs2().sum();
    return v;
}

std::vector<std::string> column_names(const SweepSpec& spec)
{
    std::vector<std::string> cols{spec.grid.variable};
    for (Method m : spec.methods) {
        const std::string pre = std::string(to_string(m)) + "_";
        for (Output o : spec.outputs) {
            switch (o) {
            case Output::Energy:
                cols.push_back(pre + "energy");
                break;
            case Output::Photons:
                cols.push_back(pre + "n");
                cols.push_back(pre + "var_n");
                break;
            case Output::Populations:
                cols.push_back(pre + "a11");
                cols.push_back(pre + "a22");
                cols.push_back(pre + "a33");
                break;
            case Output::MMoments:
                cols.push_back(pre + "m");
                cols.push_back(pre + "var_m");
                break;
            case Output::Q:
                cols.push_back(pre + "q");
                break;
            case Output::Entropy:
                cols.push_back(pre + "sl");
                break;
            }
        }
    }
    return cols;
}

std::vector<std::optional<double>> evaluate_row(const SweepSpec& spec, double g)
{
    double mu = spec.mu, theta = spec.theta;
    ModelParams base = spec.base;
    if (spec.grid.variable == "mu")
        mu = g;
    else if (spec.grid.variable == "theta")
        theta = g;
    else
        base.n_atoms = static_cast<int>(g);
    const ModelParams p = with_coupling(base, mu, theta);

    std::optional<GroundStates> gs;
    std::optional<TruncatedSpace> space;
    std::vector<std::optional<double>> row{g};
    for (Method m : spec.methods) {
        Values v;
        if (m == Method::ExactEven || m == Method::ExactOdd) {
            if (!gs) {
                if (spec.nu_max > 0) {
                    space.emplace(p.n_atoms, spec.nu_max);
                    gs = ground_states(p, *space);
                } else {
                    gs = ground_states(p);
                    space.emplace(p.n_atoms, gs->nu_max);
                }
            }
            v = evaluate_exact(p, *gs, *space, m);
        } else {
            v = evaluate_variational(p, mu, theta, m);
        }
        for (Output o : spec.outputs) {
            switch (o) {
            case Output::Energy:
                row.push_back(v.energy);
                break;
            case Output::Photons:
                row.push_back(v.n);
                row.push_back(v.var_n);
                break;
            case Output::Populations:
                for (int i = 0; i < 3; ++i)
                    row.push_back(v.pops[i]);
                break;
            case Output::MMoments:
                row.push_back(v.m);
                row.push_back(v.var_m);
                break;
            case Output::Q:
                row.push_back(v.q);
                break;
            case Output::Entropy:
                row.push_back(v.sl);
                break;
            }
        }
    }
    return row;
}

std::string join_methods(const std::vector<Method>& ms)
{
    std::string s;
    for (Method m : ms)
        s += (s.empty() ? "" : ",") + std::string(to_string(m));
    return s;
}

std::string join_outputs(const std::vector<Output>& os)
{
    std::string s;
    for (Output o : os)
        s += (s.empty() ? "" : ",") + std::string(to_string(o));
    return s;
}

}  // namespace

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

ResultTable run_sweep(const SweepSpec& spec)
{
    validate(spec);
    ResultTable t;
    const ModelParams& b = spec.base;
    t.metadata = {
        {"tool", "qsacs 1.0.0"},
        {"command", "sweep"},
        {"configuration", std::string(to_string(b.config))},
        {"hamiltonian", b.rwa ? "rwa" : "full"},
        {"omega", format_number(b.field_freq)},
        {"w1", format_number(b.level_energy[0])},
        {"w2", format_number(b.level_energy[1])},
        {"w3", format_number(b.level_energy[2])},
        {"na", std::to_string(b.n_atoms)},
        {"mu", format_number(spec.mu)},
        {"theta", format_number(spec.theta)},
        {"grid", spec.grid.variable + "=" + format_number(spec.grid.start) + ":" + format_number(spec.grid.stop) + ":"
                     + std::to_string(spec.grid.count) + (spec.grid.log_scale ? " log" : " linear")},
        {"approximations", join_methods(spec.methods)},
        {"outputs", join_outputs(spec.outputs)},
        {"nu_max", spec.nu_max > 0 ? std::to_string(spec.nu_max) : "auto"},
        {"energy_units", "per atom"},
    };
    t.columns = column_names(spec);

    const std::vector<double> grid = spec.grid.values();
    t.rows.resize(grid.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::optional<std::size_t> failed_at;
    std::string failure;

    auto worker = [&] {
        while (true) {
            const std::size_t k = next++;
            if (k >= grid.size())
                return;
            try {
                t.rows[k] = evaluate_row(spec, grid[k]);
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mutex);
                if (!failed_at || k < *failed_at) {
                    failed_at = k;
                    failure = e.what();
                }
            }
        }
    };
    const int jobs = std::min<int>(spec.jobs, static_cast<int>(grid.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failed_at)
        throw GridPointFailure("grid point " + spec.grid.variable + "=" + format_number(grid[*failed_at]) + ": "
                               + failure);
    return t;
}

void write_csv(std::ostream& os, const ResultTable& t)
{
    for (const auto& [k, v] : t.metadata)
        os << "# " << k << ": " << v << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << (row[c] ? format_number(*row[c]) : "NA");
        os << '\n';
    }
}

void write_json(std::ostream& os, const ResultTable& t)
{
    nlohmann::ordered_json j;
    for (const auto& [k, v] : t.metadata)
        j["metadata"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& v : row)
            r.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
        j["rows"].push_back(r);
    }
    os << j.dump(1) << '\n';
}

PhaseBoundaryReport find_phase_boundary(const SweepSpec& spec, double threshold, double resolution)
{
    validate(spec);
    if (spec.grid.variable != "mu")
        throw InvalidInput("phase-boundary scans mu");
    PhaseBoundaryReport rep;
    auto order = [&](double mu) {
        ++rep.evaluations;
        return minimize_surface(with_coupling(spec.base, mu, spec.theta)).rho;
    };
    const auto grid = spec.grid.values();
    std::optional<double> below;
    double hi = 0.0;
    bool found = false;
    for (double mu : grid) {
        if (order(mu) > threshold) {
            hi = mu;
            found = true;
            break;
        }
        below = mu;
    }
    if (!found)
        throw NoTransitionFound("order parameter stays below threshold over the scanned range");
    if (!below)
        throw NoTransitionFound("collective already at the start of the scan; extend the range downwards");
    double lo = *below;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (order(mid) > threshold ? hi : lo) = mid;
    }
    rep.lower = lo;
    rep.upper = hi;
    rep.numeric = 0.5 * (lo + hi);

    const ModelParams& b = spec.base;
    if (b.config == AtomicConfiguration::V && b.level_energy[1] == b.level_energy[2]) {
        const double mu_c = 0.5 * std::sqrt(b.field_freq * (b.level_energy[2] - b.level_energy[0]));
        rep.analytic = b.rwa ? 2.0 * mu_c : mu_c;
    }
    return rep;
}

DistributionTable photon_distribution(const VParams& vp, const std::vector<Approximation>& approx, int nu_max)
{
    validate(vp);
    if (approx.empty())
        throw InvalidInput("no approximation requested");
    DistributionTable t;
    t.approximations = approx;
    if (nu_max <= 0) {
        nu_max = 0;
        for (Approximation a : approx) {
            int last = 0;
            double cum = 0.0;
            const double nb = nu_bar(vp);
            for (int nu = 0;; ++nu) {
                const double p = photon_dist_v(vp, a, nu);
                cum += p;
                if (p > 0.0)
                    last = nu;
                // beyond the mode the terms decay at least geometrically
                if (nu > nb + 1 && p < 1e-17 * (1.0 - nb / (nu + 1.0)))
                    break;
                if (nu > 1 && nb == 0.0)
                    break;
            }
            nu_max = std::max(nu_max, last);
        }
    }
    t.probabilities.assign(nu_max + 1, std::vector<double>(approx.size()));
    for (int nu = 0; nu <= nu_max; ++nu)
        for (std::size_t k = 0; k < approx.size(); ++k)
            t.probabilities[nu][k] = photon_dist_v(vp, approx[k], nu);
    return t;
}

double distribution_mean(const std::vector<double>& probabilities)
{
    double m = 0.0;
    for (std::size_t nu = 0; nu < probabilities.size(); ++nu)
        m += nu * probabilities[nu];
    return m;
}

namespace {

struct GaussianResidual {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const std::vector<double>& p;

    int inputs() const { return 2; }
    int values() const { return static_cast<int>(p.size()); }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const
    {
        const double m = x(0), s = std::abs(x(1));
        for (int nu = 0; nu < values(); ++nu) {
            const double z = (nu - m) / s;
            f(nu) = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi)) - p[nu];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const
    {
        const double m = x(0), s = x(1);
        const double as = std::abs(s);
        for (int nu = 0; nu < values(); ++nu) {
            const double z = (nu - m) / as;
            const double g = std::exp(-0.5 * z * z) / (as * std::sqrt(2.0 * std::numbers::pi));
            j(nu, 0) = g * z / as;
            j(nu, 1) = g * (z * z - 1.0) / as * (s < 0 ? -1.0 : 1.0);
        }
        return 0;
    }
};

}  // namespace

GaussianFit fit_gaussian(const std::vector<double>& probabilities)
{
    if (probabilities.size() < 3)
        throw InvalidInput("too few points for a gaussian fit");
    const double mean = distribution_mean(probabilities);
    double var = 0.0;
    for (std::size_t nu = 0; nu < probabilities.size(); ++nu)
        var += probabilities[nu] * (nu - mean) * (nu - mean);
    Eigen::VectorXd x(2);
    x << mean, std::sqrt(std::max(var, 0.25));
    GaussianResidual functor{probabilities};
    Eigen::LevenbergMarquardt<GaussianResidual> lm(functor);
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    const auto status = lm.minimize(x);
    GaussianFit fit;
    fit.mean = x(0);
    fit.sigma = std::abs(x(1));
    fit.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall
                    || status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall
                    || status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall
                    || status == Eigen::LevenbergMarquardtSpace::XtolTooSmall
                    || status == Eigen::LevenbergMarquardtSpace::FtolTooSmall;
    return fit;
}

}  // namespace qsacs
