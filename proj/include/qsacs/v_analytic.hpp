#pragma once

#include "qsacs/coherent_surface.hpp"
#include "qsacs/model.hpp"

#include <numbers>
#include <utility>

namespace qsacs {

// V configuration in double resonance, couplings mu12 = mu cos(theta),
// mu13 = mu sin(theta).
struct VParams {
    double mu = 0.0;
    double theta = std::numbers::pi / 4;
    double field_freq = 1.0;  // Omega
    double omega3 = 1.0;      // = omega2
    double omega1 = 0.0;
    int n_atoms = 2;

    double mu12() const { return mu * std::cos(theta); }
    double mu13() const { return mu * std::sin(theta); }
    double gap() const { return omega3 - omega1; }
    // mu^2 at the transition
    double critical_mu_sq() const { return field_freq * gap() / 4.0; }
    // Omega = omega2 = omega3 = 1, omega1 = 0
    bool default_frame() const { return field_freq == 1.0 && omega3 == 1.0 && omega1 == 0.0; }

    ModelParams to_model() const;
    static VParams from_model(const ModelParams& p);
};

void validate(const VParams& vp);

enum class Approximation { Coherent, Even, Odd };

std::string_view to_string(Approximation a);

Regime regime(const VParams& vp);

struct VCritical {
    double rho = 0.0;
    double rho2 = 0.0;
    double rho3 = 0.0;

    CoherentPoint point() const { return {{rho, 0.0}, {rho2, 0.0}, {rho3, 0.0}}; }
};

VCritical critical_point_v(const VParams& vp);

// Minimum of the coherent surface per atom.
double e_min_v(const VParams& vp);

struct PhotonStats {
    double mean = 0.0;
    double variance = 0.0;
};

PhotonStats photon_stats_v(const VParams& vp);

// Mean photon number nu-bar of the coherent minimum (zero in the normal regime).
double nu_bar(const VParams& vp);

// Closed form for E+-/N_a; needs the default frame.
double sacs_energy_v(const VParams& vp, ParityBranch branch);

// P(nu) for the state at the V minima.
double photon_dist_v(const VParams& vp, Approximation approx, int nu);

// Var(M)/<M> - 1 at the V minima; normal-regime SACS values are the limits
// +1 (even) and -1 (odd). Coherent in the normal regime throws IndeterminateQ.
double mandel_q_m(const VParams& vp, Approximation approx);

// (a22, a33) given a11.
std::pair<double, double> population_relations(double a11, double theta, int n_atoms);

// Closed form for S+-_L; needs the default frame.
double linear_entropy_v(const VParams& vp, ParityBranch branch);

// Photon fraction of the odd-branch limit state in the normal regime.
double odd_limit_photon_fraction(const VParams& vp);

// Point on the shrinking path used for normal-regime odd limits: radii
// proportional to eps along the direction of the critical minimum at the
// transition.
CoherentPoint limit_path_point(const VParams& vp, double eps);

// Observables at the V minima for the requested approximation. In the normal
// regime the even SACS is the vacuum and the odd SACS is its eps -> 0 limit
// along limit_path_point.
ObservableReport v_report(const VParams& vp, Approximation approx);

// Direct 1 - tr(rho^2) at the V minima (normal regime: limit values).
double linear_entropy_at_minimum(const VParams& vp, Approximation approx);

}  // namespace qsacs
