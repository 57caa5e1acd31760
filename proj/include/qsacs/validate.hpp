#pragma once

#include "qsacs/sacs.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace qsacs {

enum class ValidationLevel { Fast, Full };

// Deliberately wrong variants, used to show the suite catches them.
enum class Mutant {
    None,
    FieldRadiusNoFactor2,  // critical field radius without the factor 2
    SecondMomentGamma2,    // <M^2> with |gamma_2|^2 in the lambda_3 photon term
};

Mutant parse_mutant(std::string_view s);

struct CheckResult {
    std::string name;
    bool passed = true;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool informational = false;  // reported, never fails the run
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

// |x - y| / max(|y|, 1)
double relative_deviation(cplx x, cplx y);

// Largest relative deviation of each closed form from explicit summation on
// the state vector built in the truncated Fock space.
struct OracleDeviation {
    double kernel = 0.0;
    double one_body = 0.0;
    double two_body = 0.0;
    double generators = 0.0;
    double generator_pairs = 0.0;
    double interaction = 0.0;
    double m_moments = 0.0;
    double density_matrix = 0.0;

    double max() const;
};

OracleDeviation compare_with_oracle(const SacsPoint& sp, const CoherentPoint& other,
                                    Mutant mutant = Mutant::None);

// |alpha| <= 3, |gamma_j| <= 2, uniform phases.
CoherentPoint random_point(std::mt19937_64& rng);

ValidationReport run_validation(ValidationLevel level, Mutant mutant = Mutant::None,
                                std::uint64_t seed = 20240611);

void print_report(std::ostream& os, const ValidationReport& r);

}  // namespace qsacs
