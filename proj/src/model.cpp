#include "qsacs/model.hpp"

#include "qsacs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsacs {

double ModelParams::coupling(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    if (i == 0 && j == 1)
        return mu12;
    if (i == 0 && j == 2)
        return mu13;
    if (i == 1 && j == 2)
        return mu23;
    return 0.0;
}

double ModelParams::max_coupling() const
{
    return std::max({mu12, mu13, mu23});
}

void validate(const ModelParams& p)
{
    const auto& w = p.level_energy;
    if (!(p.field_freq > 0.0) || !std::isfinite(p.field_freq))
        throw InvalidInput("field frequency must be positive and finite");
    if (!(w[0] <= w[1] && w[1] <= w[2]))
        throw InvalidInput("level energies must satisfy w1 <= w2 <= w3");
    for (double m : {p.mu12, p.mu13, p.mu23})
        if (!(m >= 0.0) || !std::isfinite(m))
            throw InvalidInput("dipole couplings must be finite and non-negative");
    if (p.n_atoms < 1)
        throw InvalidInput("atom count must be at least 1");

    switch (p.config) {
    case AtomicConfiguration::Xi:
        if (p.mu13 != 0.0)
            throw InvalidInput("Xi configuration requires mu13 = 0");
        break;
    case AtomicConfiguration::Lambda:
        if (p.mu12 != 0.0)
            throw InvalidInput("Lambda configuration requires mu12 = 0");
        break;
    case AtomicConfiguration::V:
        if (p.mu23 != 0.0)
            throw InvalidInput("V configuration requires mu23 = 0");
        break;
    }
}

CoherentPoint CoherentPoint::from_polar(double rho, double phi, double rho2, double phi2,
                                        double rho3, double phi3)
{
    return {std::polar(rho, phi), std::polar(rho2, phi2), std::polar(rho3, phi3)};
}

ExcitationWeights excitation_weights(AtomicConfiguration config)
{
    switch (config) {
    case AtomicConfiguration::Xi:
        return {1, 2};
    case AtomicConfiguration::Lambda:
        return {0, 1};
    case AtomicConfiguration::V:
        return {1, 1};
    }
    return {0, 0};
}

CoherentPoint tilde_gamma(AtomicConfiguration config, const CoherentPoint& point)
{
    const auto lam = excitation_weights(config);
    CoherentPoint out = point;
    if (lam.lambda2 % 2 != 0)
        out.gamma2 = -out.gamma2;
    if (lam.lambda3 % 2 != 0)
        out.gamma3 = -out.gamma3;
    return out;
}

Regime regime_v(const ModelParams& p)
{
    if (p.config != AtomicConfiguration::V)
        throw InvalidInput("regime_v requires the V configuration");
    if (p.level_energy[1] != p.level_energy[2])
        throw InvalidInput("regime_v requires double resonance (w2 = w3)");
    const double mu_sq = p.mu12 * p.mu12 + p.mu13 * p.mu13;
    const double gap = p.level_energy[2] - p.level_energy[0];
    return mu_sq > p.field_freq * gap / 4.0 ? Regime::Collective : Regime::Normal;
}

ModelParams rwa_coupling_map(const ModelParams& p)
{
    ModelParams out = p;
    out.mu12 *= 2.0;
    out.mu13 *= 2.0;
    out.mu23 *= 2.0;
    out.rwa = true;
    return out;
}

std::string_view to_string(AtomicConfiguration c)
{
    switch (c) {
    case AtomicConfiguration::Xi:
        return "Xi";
    case AtomicConfiguration::Lambda:
        return "Lambda";
    case AtomicConfiguration::V:
        return "V";
    }
    return "?";
}

std::string_view to_string(ParityBranch b)
{
    return b == ParityBranch::Even ? "even" : "odd";
}

AtomicConfiguration parse_configuration(std::string_view s)
{
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "xi" || lower == "cascade")
        return AtomicConfiguration::Xi;
    if (lower == "lambda")
        return AtomicConfiguration::Lambda;
    if (lower == "v")
        return AtomicConfiguration::V;
    throw InvalidInput("unknown atomic configuration: " + std::string(s));
}

}  // namespace qsacs
