#pragma once

#include "qsacs/model.hpp"
#include "qsacs/v_analytic.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsacs {

enum class Method { Coherent, Even, Odd, ExactEven, ExactOdd };
enum class Output { Energy, Photons, Populations, MMoments, Q, Entropy };

std::string_view to_string(Method m);
std::string_view to_string(Output o);
// "exact" expands to both exact sectors.
std::vector<Method> parse_methods(std::string_view list);
std::vector<Output> parse_outputs(std::string_view list);

struct GridAxis {
    std::string variable = "mu";  // mu, theta or na
    double start = 0.0;
    double stop = 2.0;
    int count = 201;
    bool log_scale = false;

    std::vector<double> values() const;
    // "start:stop:count"
    static GridAxis parse(std::string_view variable, std::string_view spec);
};

struct SweepSpec {
    ModelParams base;  // couplings are overwritten from mu and theta
    double mu = 1.0;
    double theta = std::numbers::pi / 4;
    GridAxis grid;
    std::vector<Method> methods{Method::Coherent, Method::Even, Method::Odd};
    std::vector<Output> outputs{Output::Energy};
    int nu_max = 0;  // exact diagonalization cutoff; 0 certifies automatically
    int jobs = 1;
};

// Splits mu over the two couplings allowed by the configuration:
// (mu12, mu13) for V, (mu12, mu23) for Xi, (mu13, mu23) for Lambda.
ModelParams with_coupling(const ModelParams& base, double mu, double theta);

void validate(const SweepSpec& spec);

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;  // nullopt -> NA
};

// Failure at one grid point that is not an indeterminate value.
class GridPointFailure : public std::runtime_error {
public:
    GridPointFailure(const std::string& what) : std::runtime_error(what) {}
};

// Evaluates every grid point (in parallel when spec.jobs > 1) and returns
// rows in grid order. Energies are per atom.
ResultTable run_sweep(const SweepSpec& spec);

void write_csv(std::ostream& os, const ResultTable& t);
void write_json(std::ostream& os, const ResultTable& t);
std::string format_number(double v);

struct PhaseBoundaryReport {
    double numeric = 0.0;
    double lower = 0.0;  // last coupling with rho_c <= threshold
    double upper = 0.0;  // first coupling with rho_c > threshold
    std::optional<double> analytic;
    int evaluations = 0;
};

// Scans mu along the grid of `spec` until the minimizer's rho_c exceeds
// `threshold`, then bisects the bracket to `resolution`. Throws NoTransitionFound.
PhaseBoundaryReport find_phase_boundary(const SweepSpec& spec, double threshold = 1e-6,
                                        double resolution = 1e-8);

struct DistributionTable {
    std::vector<Approximation> approximations;
    std::vector<std::vector<double>> probabilities;  // [nu][approximation]
    int nu_max() const { return static_cast<int>(probabilities.size()) - 1; }
};

// nu_max <= 0 picks the smallest cutoff leaving < 1e-15 of weight outside.
DistributionTable photon_distribution(const VParams& vp, const std::vector<Approximation>& approx, int nu_max = 0);

struct GaussianFit {
    double mean = 0.0;
    double sigma = 0.0;
    bool converged = false;
};

// Least-squares fit of a normalized gaussian density to (nu, P(nu)).
GaussianFit fit_gaussian(const std::vector<double>& probabilities);

double distribution_mean(const std::vector<double>& probabilities);

}  // namespace qsacs
