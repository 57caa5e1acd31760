#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

namespace qsacs {

using cplx = std::complex<double>;

enum class AtomicConfiguration { Xi, Lambda, V };

enum class ParityBranch { Even, Odd };

enum class Regime { Normal, Collective };

// +1 for Even, -1 for Odd.
constexpr int sign_of(ParityBranch b) { return b == ParityBranch::Even ? 1 : -1; }

struct ExcitationWeights {
    int lambda2;
    int lambda3;

    // lambda_1 is always 0.
    constexpr int operator[](int level) const {
        return level == 0 ? 0 : (level == 1 ? lambda2 : lambda3);
    }
};

// Physical constants of the N_a three-level atoms + one mode model.
// Levels are indexed 0,1,2 internally (physical levels 1,2,3).
struct ModelParams {
    double field_freq = 1.0;                       // Omega
    std::array<double, 3> level_energy{0.0, 1.0, 1.0};  // omega_1..3
    double mu12 = 0.0;
    double mu13 = 0.0;
    double mu23 = 0.0;
    int n_atoms = 2;
    bool rwa = false;
    AtomicConfiguration config = AtomicConfiguration::V;

    double coupling(int i, int j) const;  // symmetric, zero on the diagonal
    double max_coupling() const;
};

// Throws InvalidInput when any invariant of ModelParams fails.
void validate(const ModelParams& p);

// Variational coordinates (alpha; gamma_2, gamma_3) with gamma_1 = 1.
struct CoherentPoint {
    cplx alpha{0.0, 0.0};
    cplx gamma2{0.0, 0.0};
    cplx gamma3{0.0, 0.0};

    std::array<cplx, 3> gamma() const { return {cplx{1.0, 0.0}, gamma2, gamma3}; }
    double gamma_norm2() const { return 1.0 + std::norm(gamma2) + std::norm(gamma3); }

    static CoherentPoint from_polar(double rho, double phi, double rho2, double phi2,
                                    double rho3, double phi3);
};

ExcitationWeights excitation_weights(AtomicConfiguration config);

// (alpha, (-1)^l2 gamma2, (-1)^l3 gamma3); an involution.
CoherentPoint tilde_gamma(AtomicConfiguration config, const CoherentPoint& point);

// V configuration in double resonance only.
Regime regime_v(const ModelParams& p);

// Doubles every coupling and switches to RWA.
ModelParams rwa_coupling_map(const ModelParams& p);

std::string_view to_string(AtomicConfiguration c);
std::string_view to_string(ParityBranch b);
AtomicConfiguration parse_configuration(std::string_view s);

}  // namespace qsacs
