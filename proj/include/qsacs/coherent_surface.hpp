#pragma once

#include "qsacs/local_search.hpp"
#include "qsacs/model.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace qsacs {

struct PolarPoint {
    double rho = 0.0, phi = 0.0;
    double rho2 = 0.0, phi2 = 0.0;
    double rho3 = 0.0, phi3 = 0.0;

    CoherentPoint to_complex() const
    {
        return CoherentPoint::from_polar(rho, phi, rho2, phi2, rho3, phi3);
    }
};

// Energy surfaces <H>/<1> over the product coherent state.
double energy_full(const ModelParams& p, const CoherentPoint& pt);
double energy_full_polar(const ModelParams& p, const PolarPoint& pt);
double energy_rwa(const ModelParams& p, const CoherentPoint& pt);
double energy_rwa_polar(const ModelParams& p, const PolarPoint& pt);

// Dispatches on p.rwa.
double energy_surface(const ModelParams& p, const CoherentPoint& pt);

// Surface with the angles eliminated (all phases zero); radii may be signed,
// which is how the minimizer explores the phase pair {0, pi}.
double energy_radial(const ModelParams& p, double rho, double rho2, double rho3);

struct MinimizerStrategy {
    int starts_per_axis = 4;
    double rho_max = 0.0;  // <= 0 selects max(4, 4 sqrt(N_a) max(mu) / Omega)
    NelderMeadOptions local{};
    double hessian_step = 1e-4;  // relative to max(1, |x|_inf)
    int polish_rounds = 6;
    int saddle_escapes = 6;
};

struct CriticalPoint {
    double rho = 0.0;
    double rho2 = 0.0;
    double rho3 = 0.0;
    std::array<double, 3> phases{0.0, 0.0, 0.0};  // phi, phi2, phi3
    double energy = 0.0;
    bool hessian_positive = false;
    double min_hessian_eigenvalue = 0.0;

    CoherentPoint point() const
    {
        return CoherentPoint::from_polar(rho, phases[0], rho2, phases[1], rho3, phases[2]);
    }
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, CriticalPoint best)
        : std::runtime_error(what), best_(best) {}
    const CriticalPoint& best() const { return best_; }

private:
    CriticalPoint best_;
};

// Deterministic multi-start search for the lowest minimum of the radial surface.
CriticalPoint minimize_surface(const ModelParams& p, const MinimizerStrategy& strategy = {});

// Observables with their squared fluctuations for some approximation.
struct ObservableReport {
    double energy = 0.0;
    double n_photons = 0.0;
    std::array<double, 3> populations{0.0, 0.0, 0.0};
    double m_excitations = 0.0;
    double var_photons = 0.0;
    std::array<double, 3> var_populations{0.0, 0.0, 0.0};
    double var_m = 0.0;

    // Var(M)/<M> - 1; throws IndeterminateQ when <M> = 0.
    double mandel_q() const;
};

// Normalized one- and two-generator expectations in the atomic coherent state.
cplx coherent_generator(const CoherentPoint& pt, int n_atoms, int j, int k);
cplx coherent_generator_pair(const CoherentPoint& pt, int n_atoms, int i, int j, int k, int l);

ObservableReport coherent_expectations(const ModelParams& p, const CoherentPoint& pt);

}  // namespace qsacs
