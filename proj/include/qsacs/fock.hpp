#pragma once

#include "qsacs/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

namespace qsacs {

struct BasisIndex {
    int nu = 0;
    int n1 = 0;
    int n2 = 0;
    int n3 = 0;

    int excitation(const ExcitationWeights& w) const { return nu + w.lambda2 * n2 + w.lambda3 * n3; }
};

// |nu; n1, n2, n3> with nu <= nu_max, ordered nu-major then (n2, n3)
// lexicographically.
class TruncatedSpace {
public:
    static constexpr long default_max_dimension = 2'000'000;

    TruncatedSpace(int n_atoms, int nu_max, long max_dimension = default_max_dimension);

    int n_atoms() const { return n_atoms_; }
    int nu_max() const { return nu_max_; }
    int dimension() const { return static_cast<int>(basis_.size()); }
    int atomic_dimension() const { return atomic_dim_; }

    const BasisIndex& operator[](int idx) const { return basis_[idx]; }
    // -1 when (nu, n2, n3) is outside the space
    int index(int nu, int n2, int n3) const;
    int atomic_index(int n2, int n3) const;

private:
    int n_atoms_;
    int nu_max_;
    int atomic_dim_;
    std::vector<BasisIndex> basis_;
};

using SparseMatrix = Eigen::SparseMatrix<double>;
using StateVector = Eigen::VectorXcd;

// H of the model (full or RWA according to params.rwa).
SparseMatrix build_hamiltonian(const ModelParams& params, const TruncatedSpace& space);
// Counter-rotating part -1/sqrt(N_a) sum mu_ij (A_ij a + A_ji a^dag), i < j.
SparseMatrix build_counter_rotating(const ModelParams& params, const TruncatedSpace& space);

SparseMatrix generator_matrix(const TruncatedSpace& space, int i, int j);  // A_ij
SparseMatrix annihilation_matrix(const TruncatedSpace& space);             // a
SparseMatrix photon_number_matrix(const TruncatedSpace& space);            // a^dag a
SparseMatrix excitation_matrix(const TruncatedSpace& space, AtomicConfiguration config);  // M
SparseMatrix parity_matrix(const TruncatedSpace& space, AtomicConfiguration config);      // (-1)^M

struct ParitySectors {
    std::vector<int> even;
    std::vector<int> odd;

    const std::vector<int>& operator[](ParityBranch b) const
    {
        return b == ParityBranch::Even ? even : odd;
    }
};

ParitySectors parity_sectors(const TruncatedSpace& space, AtomicConfiguration config);

// Largest |H_rc| with r and c in different parity classes.
double cross_sector_norm(const SparseMatrix& h, const TruncatedSpace& space, AtomicConfiguration config);

struct Eigenpair {
    double energy = 0.0;
    StateVector state;  // over the full space, zero outside its sector
};

struct GroundStateOptions {
    int initial_nu_max = 40;
    double tolerance = 1e-10;
    long max_dimension = 20'000;
    int dense_limit = 3000;  // larger sectors use Lanczos
};

struct GroundStates {
    Eigenpair even;
    Eigenpair odd;
    int nu_max = 0;
    double delta_even = 0.0;  // |E(nu_max) - E(nu_max - 10)|
    double delta_odd = 0.0;

    const Eigenpair& global() const { return even.energy <= odd.energy ? even : odd; }
    const Eigenpair& operator[](ParityBranch b) const
    {
        return b == ParityBranch::Even ? even : odd;
    }
};

// Lowest eigenpair of h restricted to the given indices.
Eigenpair lowest_in_sector(const SparseMatrix& h, const std::vector<int>& sector, int dense_limit = 3000);

// Per-sector lowest eigenpairs at a certified cutoff; throws
// CutoffNotConverged once the space would exceed max_dimension.
GroundStates ground_states(const ModelParams& params, const GroundStateOptions& opts = {});

// Lowest eigenpairs at a fixed cutoff, no certification.
GroundStates ground_states(const ModelParams& params, const TruncatedSpace& space, int dense_limit = 3000);

// All eigenvalues of one sector, ascending.
std::vector<double> sector_spectrum(const ModelParams& params, const TruncatedSpace& space, ParityBranch branch);

// Photon cutoff for state construction at this point.
int sacs_cutoff(const CoherentPoint& point);

// Unnormalized |alpha; gamma} +- |-alpha; tilde gamma}; throws TailTooLarge
// when the field weight beyond the cutoff exceeds 1e-14.
StateVector build_sacs_vector(const CoherentPoint& point, ParityBranch branch,
                              AtomicConfiguration config, const TruncatedSpace& space);

// <psi|op|psi>, divided by <psi|psi> when normalize is set.
cplx expect(const StateVector& state, const SparseMatrix& op, bool normalize = true);

// Atomic density matrix, rows indexed by TruncatedSpace::atomic_index.
Eigen::MatrixXcd partial_trace_field(const StateVector& state, const TruncatedSpace& space);

// Max deviation of U H_R U^dag from cos(2 theta) H_R + (i/2) sin(2 theta) [M, H_R]
// over rows and columns with nu < nu_max - 2, U = exp(i theta M).
double rotation_identity_check(const ModelParams& params, const TruncatedSpace& space, double theta);

void write_matrix_market(std::ostream& os, const SparseMatrix& m);
void write_eigenvalues(std::ostream& os, const std::vector<double>& values);

}  // namespace qsacs
