#pragma once

#include "qsacs/coherent_surface.hpp"
#include "qsacs/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace qsacs {

// Parity-projected coherent state |alpha; gamma} +- |-alpha; tilde gamma}.
struct SacsPoint {
    CoherentPoint point;
    ParityBranch branch = ParityBranch::Even;
    AtomicConfiguration config = AtomicConfiguration::V;
    int n_atoms = 1;
};

// value * exp(log_scale). Unnormalized SACS quantities grow like
// exp(|alpha|^2) (gamma* . gamma)^N_a, so they are carried in this form.
template <class T>
struct Scaled {
    T value{};
    double log_scale = 0.0;

    T unscaled() const { return value * std::exp(log_scale); }
};

// Off-diagonal reproducing kernel  +-{alpha; gamma | alpha'; gamma'}+-.
cplx kernel(cplx alpha, const std::array<cplx, 3>& gamma, cplx alpha_p,
            const std::array<cplx, 3>& gamma_p, ParityBranch branch, AtomicConfiguration config,
            int n_atoms);

// Squared norm of the state at sp (the kernel on the diagonal).
Scaled<double> norm_squared(const SacsPoint& sp);

struct OneBody {
    std::array<double, 3> populations{};  // <A_ii>
    double photons = 0.0;                 // <a^dag a>
};

struct TwoBody {
    std::array<double, 3> populations_sq{};  // <A_ii^2>
    double photons_sq = 0.0;                 // <(a^dag a)^2>
};

// Interaction pieces for the level pair (i, j), i < j.
struct InteractionTerms {
    cplx a_ij_a;   // <A_ij a>
    cplx a_ji_a;   // <A_ji a>
    double dipole; // <(A_ij + A_ji)(a + a^dag)>
};

struct MMoments {
    double mean = 0.0;
    double second = 0.0;
    double variance = 0.0;

    // Var(M)/<M> - 1; throws IndeterminateQ when <M> = 0.
    double mandel_q() const;
};

// Normalized expectations; all throw DegenerateState when the norm vanishes.
OneBody expect_one_body(const SacsPoint& sp);
TwoBody expect_two_body(const SacsPoint& sp);
cplx expect_generator(const SacsPoint& sp, int i, int j);                   // <A_ij>
cplx expect_generator_pair(const SacsPoint& sp, int i, int j, int k, int l);  // <A_ij A_kl>
InteractionTerms expect_interaction(const SacsPoint& sp, int i, int j);
MMoments expect_m_moments(const SacsPoint& sp);
double expect_photon_population(const SacsPoint& sp, int i);  // <a^dag a A_ii>

// Unnormalized counterparts (the closed forms before division by the kernel).
Scaled<OneBody> unnormalized_one_body(const SacsPoint& sp);
Scaled<TwoBody> unnormalized_two_body(const SacsPoint& sp);
Scaled<cplx> unnormalized_generator(const SacsPoint& sp, int i, int j);
Scaled<cplx> unnormalized_generator_pair(const SacsPoint& sp, int i, int j, int k, int l);
Scaled<InteractionTerms> unnormalized_interaction(const SacsPoint& sp, int i, int j);
Scaled<MMoments> unnormalized_m_moments(const SacsPoint& sp);  // variance left at 0

// <H> in the normalized SACS; full or RWA Hamiltonian per params.rwa.
double sacs_energy(const ModelParams& params, const SacsPoint& sp);

ObservableReport sacs_report(const ModelParams& params, const SacsPoint& sp);

// Weights w+ and w- (summing to 1) with E_coh = w+ E+ + w- E-.
std::array<double, 2> parity_weights(const CoherentPoint& pt, AtomicConfiguration config,
                                     int n_atoms);

// Atomic density matrix after tracing out the field. Rows and columns run
// over (n2, n3) in lexicographic order with n2 + n3 <= N_a.
struct ReducedDensityMatrix {
    int n_atoms = 0;
    Eigen::MatrixXcd rho;

    static int dimension(int n_atoms) { return (n_atoms + 1) * (n_atoms + 2) / 2; }
    static int index(int n2, int n3, int n_atoms);
};

ReducedDensityMatrix reduced_density_matrix(const SacsPoint& sp);

// 1 - tr(rho^2) of the reduced atomic state.
double linear_entropy(const SacsPoint& sp);
double linear_entropy(const ReducedDensityMatrix& rdm);

// Radial minimization of the SACS energy (all phases zero), started from
// `start`. Not used by the sweep, which evaluates at coherent minima.
CriticalPoint minimize_sacs_energy(const ModelParams& params, ParityBranch branch,
                                   const CriticalPoint& start,
                                   const NelderMeadOptions& opts = {});

}  // namespace qsacs
