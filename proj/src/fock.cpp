#include "qsacs/fock.hpp"

#include "qsacs/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace qsacs {

TruncatedSpace::TruncatedSpace(int n_atoms, int nu_max, long max_dimension)
    : n_atoms_(n_atoms), nu_max_(nu_max), atomic_dim_((n_atoms + 1) * (n_atoms + 2) / 2)
{
    if (n_atoms < 1)
        throw InvalidInput("atom count must be at least 1");
    if (nu_max < 0)
        throw InvalidInput("photon cutoff must be non-negative");
    const long dim = static_cast<long>(nu_max + 1) * atomic_dim_;
    if (dim > max_dimension)
        throw DimensionOverflow("truncated space dimension " + std::to_string(dim) + " exceeds limit "
                                + std::to_string(max_dimension));
    basis_.reserve(dim);
    for (int nu = 0; nu <= nu_max; ++nu)
        for (int n2 = 0; n2 <= n_atoms; ++n2)
            for (int n3 = 0; n2 + n3 <= n_atoms; ++n3)
                basis_.push_back({nu, n_atoms - n2 - n3, n2, n3});
}

int TruncatedSpace::atomic_index(int n2, int n3) const
{
    return n2 * (n_atoms_ + 1) - n2 * (n2 - 1) / 2 + n3;
}

int TruncatedSpace::index(int nu, int n2, int n3) const
{
    if (nu < 0 || nu > nu_max_ || n2 < 0 || n3 < 0 || n2 + n3 > n_atoms_)
        return -1;
    return nu * atomic_dim_ + atomic_index(n2, n3);
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

std::array<int, 3> occupations(const BasisIndex& b) { return {b.n1, b.n2, b.n3}; }

// Adds coeff * A_ij times a^dag (dnu = +1), a (dnu = -1) or the identity (dnu = 0).
void add_term(Triplets& t, const TruncatedSpace& space, int i, int j, int dnu, double coeff)
{
    for (int c = 0; c < space.dimension(); ++c) {
        const BasisIndex& b = space[c];
        auto n = occupations(b);
        double amp = coeff;
        if (i == j) {
            amp *= n[i];
        } else {
            amp *= std::sqrt(static_cast<double>(n[j]) * (n[i] + 1));
            --n[j];
            ++n[i];
        }
        const int nu = b.nu + dnu;
        if (dnu > 0)
            amp *= std::sqrt(static_cast<double>(nu));
        else if (dnu < 0)
            amp *= std::sqrt(static_cast<double>(b.nu));
        if (amp == 0.0)
            continue;
        const int r = space.index(nu, n[1], n[2]);
        if (r >= 0)
            t.emplace_back(r, c, amp);
    }
}

SparseMatrix from_triplets(const TruncatedSpace& space, const Triplets& t)
{
    SparseMatrix m(space.dimension(), space.dimension());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

void add_diagonal(Triplets& t, const ModelParams& p, const TruncatedSpace& space)
{
    for (int c = 0; c < space.dimension(); ++c) {
        const BasisIndex& b = space[c];
        const double d = p.field_freq * b.nu + p.level_energy[0] * b.n1 + p.level_energy[1] * b.n2
                         + p.level_energy[2] * b.n3;
        if (d != 0.0)
            t.emplace_back(c, c, d);
    }
}

}  // namespace

SparseMatrix build_hamiltonian(const ModelParams& params, const TruncatedSpace& space)
{
    validate(params);
    if (params.n_atoms != space.n_atoms())
        throw InvalidInput("space and parameters disagree on the atom count");
    Triplets t;
    add_diagonal(t, params, space);
    const double inv = 1.0 / std::sqrt(static_cast<double>(space.n_atoms()));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double mu = params.coupling(i, j);
            if (mu == 0.0)
                continue;
            const double g = -mu * inv;
            add_term(t, space, i, j, +1, g);  // A_ij a^dag
            add_term(t, space, j, i, -1, g);  // A_ji a
            if (!params.rwa) {
                add_term(t, space, i, j, -1, g);
                add_term(t, space, j, i, +1, g);
            }
        }
    return from_triplets(space, t);
}

SparseMatrix build_counter_rotating(const ModelParams& params, const TruncatedSpace& space)
{
    validate(params);
    Triplets t;
    const double inv = 1.0 / std::sqrt(static_cast<double>(space.n_atoms()));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double mu = params.coupling(i, j);
            if (mu == 0.0)
                continue;
            add_term(t, space, i, j, -1, -mu * inv);
            add_term(t, space, j, i, +1, -mu * inv);
        }
    return from_triplets(space, t);
}

SparseMatrix generator_matrix(const TruncatedSpace& space, int i, int j)
{
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw InvalidInput("level index out of range");
    Triplets t;
    add_term(t, space, i, j, 0, 1.0);
    return from_triplets(space, t);
}

SparseMatrix annihilation_matrix(const TruncatedSpace& space)
{
    Triplets t;
    for (int c = 0; c < space.dimension(); ++c) {
        const BasisIndex& b = space[c];
        if (b.nu > 0)
            t.emplace_back(space.index(b.nu - 1, b.n2, b.n3), c, std::sqrt(static_cast<double>(b.nu)));
    }
    return from_triplets(space, t);
}

SparseMatrix photon_number_matrix(const TruncatedSpace& space)
{
    Triplets t;
    for (int c = 0; c < space.dimension(); ++c)
        if (space[c].nu > 0)
            t.emplace_back(c, c, space[c].nu);
    return from_triplets(space, t);
}

SparseMatrix excitation_matrix(const TruncatedSpace& space, AtomicConfiguration config)
{
    const auto w = excitation_weights(config);
    Triplets t;
    for (int c = 0; c < space.dimension(); ++c) {
        const int m = space[c].excitation(w);
        if (m != 0)
            t.emplace_back(c, c, m);
    }
    return from_triplets(space, t);
}

SparseMatrix parity_matrix(const TruncatedSpace& space, AtomicConfiguration config)
{
    const auto w = excitation_weights(config);
    Triplets t;
    for (int c = 0; c < space.dimension(); ++c)
        t.emplace_back(c, c, space[c].excitation(w) % 2 == 0 ? 1.0 : -1.0);
    return from_triplets(space, t);
}

ParitySectors parity_sectors(const TruncatedSpace& space, AtomicConfiguration config)
{
    const auto w = excitation_weights(config);
    ParitySectors s;
    for (int c = 0; c < space.dimension(); ++c)
        (space[c].excitation(w) % 2 == 0 ? s.even : s.odd).push_back(c);
    return s;
}

double cross_sector_norm(const SparseMatrix& h, const TruncatedSpace& space, AtomicConfiguration config)
{
    const auto w = excitation_weights(config);
    double worst = 0.0;
    for (int c = 0; c < h.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(h, c); it; ++it) {
            const int pr = space[static_cast<int>(it.row())].excitation(w) % 2;
            const int pc = space[c].excitation(w) % 2;
            if (pr != pc)
                worst = std::max(worst, std::abs(it.value()));
        }
    return worst;
}

namespace {

void fix_phase(Eigen::VectorXd& v)
{
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v(k) < 0.0)
        v = -v;
}

Eigen::MatrixXd dense_block(const SparseMatrix& h, const std::vector<int>& sector)
{
    const int n = static_cast<int>(sector.size());
    std::vector<int> pos(h.rows(), -1);
    for (int k = 0; k < n; ++k)
        pos[sector[k]] = k;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (SparseMatrix::InnerIterator it(h, sector[k]); it; ++it) {
            const int r = pos[it.row()];
            if (r >= 0)
                d(r, k) = it.value();
        }
    return d;
}

SparseMatrix sparse_block(const SparseMatrix& h, const std::vector<int>& sector)
{
    const int n = static_cast<int>(sector.size());
    std::vector<int> pos(h.rows(), -1);
    for (int k = 0; k < n; ++k)
        pos[sector[k]] = k;
    Triplets t;
    for (int k = 0; k < n; ++k)
        for (SparseMatrix::InnerIterator it(h, sector[k]); it; ++it) {
            const int r = pos[it.row()];
            if (r >= 0)
                t.emplace_back(r, k, it.value());
        }
    SparseMatrix b(n, n);
    b.setFromTriplets(t.begin(), t.end());
    return b;
}

// Restarted Lanczos with full reorthogonalization for the lowest eigenpair.
std::pair<double, Eigen::VectorXd> lanczos_lowest(const SparseMatrix& a)
{
    const int n = static_cast<int>(a.rows());
    const int m = std::min(n, 120);
    Eigen::VectorXd start(n);
    for (int i = 0; i < n; ++i)
        start(i) = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
    start.normalize();

    double theta = 0.0;
    for (int restart = 0; restart < 200; ++restart) {
        Eigen::MatrixXd v(n, m);
        Eigen::VectorXd alpha(m), beta(m);
        v.col(0) = start;
        int steps = m;
        for (int k = 0; k < m; ++k) {
            Eigen::VectorXd w = a * v.col(k);
            alpha(k) = v.col(k).dot(w);
            w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
            w -= v.leftCols(k + 1) * (v.leftCols(k + 1).transpose() * w);
            beta(k) = w.norm();
            if (k + 1 == m)
                break;
            if (beta(k) < 1e-13) {
                steps = k + 1;
                break;
            }
            v.col(k + 1) = w / beta(k);
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
        for (int k = 0; k < steps; ++k) {
            tri(k, k) = alpha(k);
            if (k + 1 < steps)
                tri(k, k + 1) = tri(k + 1, k) = beta(k);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        theta = es.eigenvalues()(0);
        Eigen::VectorXd y = v.leftCols(steps) * es.eigenvectors().col(0);
        y.normalize();
        const double resid = (a * y - theta * y).norm();
        start = y;
        if (resid < 1e-11 * std::max(1.0, std::abs(theta)))
            break;
    }
    return {theta, start};
}

}  // namespace

Eigenpair lowest_in_sector(const SparseMatrix& h, const std::vector<int>& sector, int dense_limit)
{
    if (sector.empty())
        throw InvalidInput("empty parity sector");
    double e = 0.0;
    Eigen::VectorXd v;
    if (static_cast<int>(sector.size()) <= dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_block(h, sector));
        e = es.eigenvalues()(0);
        v = es.eigenvectors().col(0);
    } else {
        std::tie(e, v) = lanczos_lowest(sparse_block(h, sector));
    }
    fix_phase(v);
    Eigenpair out;
    out.energy = e;
    out.state = StateVector::Zero(h.rows());
    for (std::size_t k = 0; k < sector.size(); ++k)
        out.state(sector[k]) = v(static_cast<Eigen::Index>(k));
    return out;
}

GroundStates ground_states(const ModelParams& params, const TruncatedSpace& space, int dense_limit)
{
    const SparseMatrix h = build_hamiltonian(params, space);
    const ParitySectors s = parity_sectors(space, params.config);
    GroundStates g;
    g.even = lowest_in_sector(h, s.even, dense_limit);
    g.odd = lowest_in_sector(h, s.odd, dense_limit);
    g.nu_max = space.nu_max();
    return g;
}

GroundStates ground_states(const ModelParams& params, const GroundStateOptions& opts)
{
    validate(params);
    const long atomic = static_cast<long>(params.n_atoms + 1) * (params.n_atoms + 2) / 2;
    int nu = std::max(opts.initial_nu_max, 10);
    double last_delta = std::numeric_limits<double>::infinity();
    while (static_cast<long>(nu + 1) * atomic <= opts.max_dimension) {
        GroundStates hi = ground_states(params, TruncatedSpace(params.n_atoms, nu, opts.max_dimension), opts.dense_limit);
        const GroundStates lo =
            ground_states(params, TruncatedSpace(params.n_atoms, nu - 10, opts.max_dimension), opts.dense_limit);
        hi.delta_even = std::abs(hi.even.energy - lo.even.energy);
        hi.delta_odd = std::abs(hi.odd.energy - lo.odd.energy);
        last_delta = std::max(hi.delta_even, hi.delta_odd);
        if (last_delta < opts.tolerance)
            return hi;
        nu *= 2;
    }
    throw CutoffNotConverged("ground-state energy not converged within the dimension limit", last_delta);
}

std::vector<double> sector_spectrum(const ModelParams& params, const TruncatedSpace& space, ParityBranch branch)
{
    const SparseMatrix h = build_hamiltonian(params, space);
    const ParitySectors s = parity_sectors(space, params.config);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_block(h, s[branch]), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

int sacs_cutoff(const CoherentPoint& point)
{
    const double a = std::norm(point.alpha);
    return static_cast<int>(std::ceil(a + 10.0 * std::sqrt(a + 1.0) + 20.0));
}

StateVector build_sacs_vector(const CoherentPoint& point, ParityBranch branch,
                              AtomicConfiguration config, const TruncatedSpace& space)
{
    const double a = std::norm(point.alpha);
    // Poisson weight beyond the cutoff
    double tail = 0.0;
    if (a > 0.0) {
        double log_term = (space.nu_max() + 1) * std::log(a) - std::lgamma(space.nu_max() + 2.0) - a;
        for (int nu = space.nu_max() + 1; nu < space.nu_max() + 100000; ++nu) {
            const double term = std::exp(log_term);
            tail += term;
            if (nu > a && term < 1e-18 * std::max(tail, 1e-300))
                break;
            log_term += std::log(a) - std::log(nu + 1.0);
        }
    }
    if (tail > 1e-14)
        throw TailTooLarge("photon cutoff too small for this field amplitude", tail);

    const int n = space.n_atoms();
    const auto w = excitation_weights(config);
    const double s = sign_of(branch);

    std::vector<cplx> field(space.nu_max() + 1);
    field[0] = 1.0;
    for (int nu = 1; nu <= space.nu_max(); ++nu)
        field[nu] = field[nu - 1] * point.alpha / std::sqrt(static_cast<double>(nu));

    StateVector v = StateVector::Zero(space.dimension());
    for (int c = 0; c < space.dimension(); ++c) {
        const BasisIndex& b = space[c];
        const int m = b.excitation(w);
        const double proj = 1.0 + s * (m % 2 == 0 ? 1.0 : -1.0);
        if (proj == 0.0)
            continue;
        const double log_mult =
            std::lgamma(n + 1.0) - std::lgamma(b.n1 + 1.0) - std::lgamma(b.n2 + 1.0) - std::lgamma(b.n3 + 1.0);
        v(c) = proj * std::exp(0.5 * log_mult) * field[b.nu] * std::pow(point.gamma2, b.n2)
               * std::pow(point.gamma3, b.n3);
    }
    return v;
}

cplx expect(const StateVector& state, const SparseMatrix& op, bool normalize)
{
    const StateVector opv = op.cast<cplx>() * state;
    const cplx num = state.dot(opv);
    return normalize ? num / state.squaredNorm() : num;
}

Eigen::MatrixXcd partial_trace_field(const StateVector& state, const TruncatedSpace& space)
{
    const int d = space.atomic_dimension();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int nu = 0; nu <= space.nu_max(); ++nu) {
        const auto block = state.segment(static_cast<Eigen::Index>(nu) * d, d);
        rho += block * block.adjoint();
    }
    return rho / state.squaredNorm();
}

double rotation_identity_check(const ModelParams& params, const TruncatedSpace& space, double theta)
{
    using CSparse = Eigen::SparseMatrix<cplx>;
    const CSparse hr = build_counter_rotating(params, space).cast<cplx>();
    const CSparse m = excitation_matrix(space, params.config).cast<cplx>();

    const auto w = excitation_weights(params.config);
    std::vector<Eigen::Triplet<cplx>> ut, udt;
    for (int c = 0; c < space.dimension(); ++c) {
        const double mc = space[c].excitation(w);
        ut.emplace_back(c, c, std::polar(1.0, theta * mc));
        udt.emplace_back(c, c, std::polar(1.0, -theta * mc));
    }
    CSparse u(space.dimension(), space.dimension()), ud(space.dimension(), space.dimension());
    u.setFromTriplets(ut.begin(), ut.end());
    ud.setFromTriplets(udt.begin(), udt.end());

    const CSparse lhs = u * hr * ud;
    const CSparse comm = m * hr - hr * m;
    const CSparse rhs = std::cos(2.0 * theta) * hr + cplx(0.0, 0.5 * std::sin(2.0 * theta)) * comm;
    const CSparse diff = lhs - rhs;

    const int edge = space.nu_max() - 2;
    double worst = 0.0;
    for (int c = 0; c < diff.outerSize(); ++c) {
        if (space[c].nu >= edge)
            continue;
        for (CSparse::InnerIterator it(diff, c); it; ++it)
            if (space[static_cast<int>(it.row())].nu < edge)
                worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& m)
{
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    os << std::setprecision(16) << std::scientific;
    for (int c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it)
            os << it.row() + 1 << ' ' << c + 1 << ' ' << it.value() << '\n';
}

void write_eigenvalues(std::ostream& os, const std::vector<double>& values)
{
    os << std::setprecision(16) << std::scientific;
    for (double v : values)
        os << v << '\n';
}

}  // namespace qsacs
