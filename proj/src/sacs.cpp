#include "qsacs/sacs.hpp"

#include "qsacs/errors.hpp"

#include <cmath>
#include <limits>

namespace qsacs {

namespace {

// Shared quantities for one SACS point. Direct terms are measured relative
// to P = exp(|alpha|^2) g^N and cross terms (overlap with the reflected
// state) relative to the same P, so everything stays O(1).
struct Ctx {
    int n;
    int sigma;  // +1 even, -1 odd
    cplx alpha;
    double a;  // |alpha|^2
    std::array<cplx, 3> g;
    std::array<cplx, 3> gt;   // tilde gamma
    std::array<int, 3> lam;
    std::array<int, 3> par;   // (-1)^lambda_i
    double gnorm;             // gamma* . gamma
    double s_odd;             // sum of |gamma_i|^2 over odd lambda_i
    double t;                 // gamma* . tilde gamma
    double log_p;

    Ctx(const SacsPoint& sp)
        : n(sp.n_atoms), sigma(sign_of(sp.branch)), alpha(sp.point.alpha), a(std::norm(sp.point.alpha))
    {
        if (n < 1)
            throw InvalidInput("SACS requires at least one atom");
        const auto w = excitation_weights(sp.config);
        g = sp.point.gamma();
        gt = tilde_gamma(sp.config, sp.point).gamma();
        lam = {0, w.lambda2, w.lambda3};
        s_odd = 0.0;
        for (int i = 0; i < 3; ++i) {
            par[i] = lam[i] % 2 == 0 ? 1 : -1;
            if (par[i] < 0)
                s_odd += std::norm(g[i]);
        }
        gnorm = sp.point.gamma_norm2();
        t = gnorm - 2.0 * s_odd;
        log_p = a + n * std::log(gnorm);
    }

    double ff(int k) const
    {
        double v = 1.0;
        for (int q = 0; q < k; ++q)
            v *= n - q;
        return v;
    }

    // 1 + sgn exp(-2a) (t/g)^(n-k), accurate when the sum nearly cancels.
    double one_plus(int sgn, int k) const
    {
        const int e = n - k;
        if (e < 0)
            return 1.0;
        const double r = t / gnorm;
        if (r > 0.0) {
            const double log_w = -2.0 * a + e * std::log1p(-2.0 * s_odd / gnorm);
            return sgn > 0 ? 1.0 + std::exp(log_w) : -std::expm1(log_w);
        }
        return 1.0 + sgn * std::exp(-2.0 * a) * std::pow(r, e);
    }

    double direct(int k) const { return std::pow(gnorm, -k); }

    // exp(-|alpha|^2) t^(n-k) / P
    double cross(int k) const
    {
        if (n < k)
            return 0.0;
        return std::exp(-2.0 * a) * std::pow(t / gnorm, n - k) * std::pow(gnorm, -k);
    }

    double kernel_scaled() const { return 2.0 * one_plus(sigma, 0); }

    double checked_kernel() const
    {
        const double k = kernel_scaled();
        if (!(k > 0.0) || std::log(k) + log_p < std::log(1e-300))
            throw DegenerateState("SACS norm vanishes at this point");
        return k;
    }
};

OneBody one_body_scaled(const Ctx& c)
{
    OneBody ob;
    for (int i = 0; i < 3; ++i)
        ob.populations[i] = 2.0 * c.n * std::norm(c.g[i]) / c.gnorm * c.one_plus(c.sigma * c.par[i], 1);
    ob.photons = 2.0 * c.a * c.one_plus(-c.sigma, 0);
    return ob;
}

TwoBody two_body_scaled(const Ctx& c)
{
    TwoBody tb;
    for (int i = 0; i < 3; ++i) {
        const double p = std::norm(c.g[i]);
        double v = c.n * p / c.gnorm * c.one_plus(c.sigma * c.par[i], 1);
        if (c.n >= 2)
            v += c.ff(2) * p * p * c.direct(2) * c.one_plus(c.sigma, 2);
        tb.populations_sq[i] = 2.0 * v;
    }
    tb.photons_sq = 2.0 * c.a * ((c.a + 1.0) + c.sigma * (c.a - 1.0) * c.cross(0));
    return tb;
}

cplx generator_scaled(const Ctx& c, int i, int j)
{
    const auto& g = c.g;
    const auto& gt = c.gt;
    const cplx d = std::conj(g[i]) * g[j] + std::conj(gt[i]) * gt[j];
    const cplx x = std::conj(g[i]) * gt[j] + std::conj(gt[i]) * g[j];
    return static_cast<double>(c.n) * (c.direct(1) * d + static_cast<double>(c.sigma) * c.cross(1) * x);
}

cplx generator_pair_scaled(const Ctx& c, int i, int j, int k, int l)
{
    const auto& g = c.g;
    const auto& gt = c.gt;
    const double n = c.n;
    const double ff2 = c.ff(2);
    cplx direct = ff2 * c.direct(2)
                  * (std::conj(g[i]) * g[j] * std::conj(g[k]) * g[l]
                     + std::conj(gt[i]) * gt[j] * std::conj(gt[k]) * gt[l]);
    cplx cross = ff2 * c.cross(2)
                 * (std::conj(g[i]) * gt[j] * std::conj(g[k]) * gt[l]
                    + std::conj(gt[i]) * g[j] * std::conj(gt[k]) * g[l]);
    if (j == k) {
        direct += n * c.direct(1) * (std::conj(g[i]) * g[l] + std::conj(gt[i]) * gt[l]);
        cross += n * c.cross(1) * (std::conj(g[i]) * gt[l] + std::conj(gt[i]) * g[l]);
    }
    return direct + static_cast<double>(c.sigma) * cross;
}

InteractionTerms interaction_scaled(const Ctx& c, int i, int j)
{
    InteractionTerms it{};
    const double pref = 1.0 - c.par[i] * c.par[j];
    if (pref == 0.0)
        return it;
    const auto& g = c.g;
    const auto& gt = c.gt;
    const double n = c.n;
    it.a_ij_a = n * pref * c.alpha * std::conj(g[i]) * g[j] / c.gnorm * c.one_plus(c.sigma * c.par[i], 1);
    it.a_ji_a = n * pref * c.alpha * std::conj(g[j]) * g[i] / c.gnorm * c.one_plus(c.sigma * c.par[j], 1);

    // {alpha| a + a^dag |alpha'} = (alpha' + alpha*) exp(alpha* alpha'); the
    // reflected branch has alpha' = -alpha.
    const cplx direct = (c.alpha + std::conj(c.alpha)) * (std::conj(g[i]) * g[j] + std::conj(g[j]) * g[i]);
    const cplx cross = (std::conj(c.alpha) - c.alpha) * (std::conj(g[i]) * gt[j] + std::conj(g[j]) * gt[i]);
    it.dipole = (n * pref * (c.direct(1) * direct + static_cast<double>(c.sigma) * c.cross(1) * cross)).real();
    return it;
}

MMoments m_moments_scaled(const Ctx& c)
{
    const double n = c.n;
    const int s = c.sigma;
    MMoments m;

    double lin_direct = 0.0, lin_cross = 0.0;
    for (int i = 1; i < 3; ++i) {
        lin_direct += c.lam[i] * std::norm(c.g[i]);
        lin_cross += c.par[i] * c.lam[i] * std::norm(c.g[i]);
    }
    m.mean = 2.0 * (c.a + n * lin_direct * c.direct(1)) + 2.0 * s * (-c.a * c.cross(0) + n * lin_cross * c.cross(1));

    double sq = 2.0 * c.a * ((c.a + 1.0) + s * (c.a - 1.0) * c.cross(0));
    for (int i = 1; i < 3; ++i) {
        const double p = std::norm(c.g[i]);
        const double l = c.lam[i];
        double pop_sq = p * (c.direct(1) + s * c.par[i] * c.cross(1));
        if (c.n >= 2)
            pop_sq += (n - 1.0) * p * p * (c.direct(2) + s * c.cross(2));
        sq += 2.0 * l * l * n * pop_sq;
        sq += 4.0 * n * l * c.a * p * (c.direct(1) - s * c.par[i] * c.cross(1));
    }
    if (c.n >= 2) {
        const double p2 = std::norm(c.g[1]), p3 = std::norm(c.g[2]);
        sq += 4.0 * c.ff(2) * c.lam[1] * c.lam[2] * p2 * p3
              * (c.direct(2) + s * c.par[1] * c.par[2] * c.cross(2));
    }
    m.second = sq;
    return m;
}

void check_pair(int i, int j)
{
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw InvalidInput("level index out of range");
}

}  // namespace

cplx kernel(cplx alpha, const std::array<cplx, 3>& gamma, cplx alpha_p,
            const std::array<cplx, 3>& gamma_p, ParityBranch branch, AtomicConfiguration config,
            int n_atoms)
{
    const auto w = excitation_weights(config);
    const std::array<int, 3> par{1, w.lambda2 % 2 ? -1 : 1, w.lambda3 % 2 ? -1 : 1};
    cplx dot{0.0, 0.0}, dot_t{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        dot += std::conj(gamma[i]) * gamma_p[i];
        dot_t += std::conj(gamma[i]) * (static_cast<double>(par[i]) * gamma_p[i]);
    }
    const cplx z = std::conj(alpha) * alpha_p;
    return 2.0 * (std::exp(z) * std::pow(dot, n_atoms)
                  + static_cast<double>(sign_of(branch)) * std::exp(-z) * std::pow(dot_t, n_atoms));
}

Scaled<double> norm_squared(const SacsPoint& sp)
{
    const Ctx c(sp);
    return {c.kernel_scaled(), c.log_p};
}

Scaled<OneBody> unnormalized_one_body(const SacsPoint& sp)
{
    const Ctx c(sp);
    return {one_body_scaled(c), c.log_p};
}

Scaled<TwoBody> unnormalized_two_body(const SacsPoint& sp)
{
    const Ctx c(sp);
    return {two_body_scaled(c), c.log_p};
}

Scaled<cplx> unnormalized_generator(const SacsPoint& sp, int i, int j)
{
    check_pair(i, j);
    const Ctx c(sp);
    return {generator_scaled(c, i, j), c.log_p};
}

Scaled<cplx> unnormalized_generator_pair(const SacsPoint& sp, int i, int j, int k, int l)
{
    check_pair(i, j);
    check_pair(k, l);
    const Ctx c(sp);
    return {generator_pair_scaled(c, i, j, k, l), c.log_p};
}

Scaled<InteractionTerms> unnormalized_interaction(const SacsPoint& sp, int i, int j)
{
    check_pair(i, j);
    const Ctx c(sp);
    return {interaction_scaled(c, i, j), c.log_p};
}

Scaled<MMoments> unnormalized_m_moments(const SacsPoint& sp)
{
    const Ctx c(sp);
    return {m_moments_scaled(c), c.log_p};
}

OneBody expect_one_body(const SacsPoint& sp)
{
    const Ctx c(sp);
    const double k = c.checked_kernel();
    OneBody ob = one_body_scaled(c);
    for (double& v : ob.populations)
        v /= k;
    ob.photons /= k;
    return ob;
}

TwoBody expect_two_body(const SacsPoint& sp)
{
    const Ctx c(sp);
    const double k = c.checked_kernel();
    TwoBody tb = two_body_scaled(c);
    for (double& v : tb.populations_sq)
        v /= k;
    tb.photons_sq /= k;
    return tb;
}

cplx expect_generator(const SacsPoint& sp, int i, int j)
{
    check_pair(i, j);
    const Ctx c(sp);
    return generator_scaled(c, i, j) / c.checked_kernel();
}

cplx expect_generator_pair(const SacsPoint& sp, int i, int j, int k, int l)
{
    check_pair(i, j);
    check_pair(k, l);
    const Ctx c(sp);
    return generator_pair_scaled(c, i, j, k, l) / c.checked_kernel();
}

InteractionTerms expect_interaction(const SacsPoint& sp, int i, int j)
{
    check_pair(i, j);
    const Ctx c(sp);
    const double k = c.checked_kernel();
    InteractionTerms it = interaction_scaled(c, i, j);
    it.a_ij_a /= k;
    it.a_ji_a /= k;
    it.dipole /= k;
    return it;
}

double MMoments::mandel_q() const
{
    if (mean == 0.0)
        throw IndeterminateQ("Q_M undefined: <M> = 0");
    return variance / mean - 1.0;
}

MMoments expect_m_moments(const SacsPoint& sp)
{
    const Ctx c(sp);
    const double k = c.checked_kernel();
    MMoments m = m_moments_scaled(c);
    m.mean /= k;
    m.second /= k;
    m.variance = std::max(0.0, m.second - m.mean * m.mean);
    return m;
}

double expect_photon_population(const SacsPoint& sp, int i)
{
    check_pair(i, i);
    const Ctx c(sp);
    const double k = c.checked_kernel();
    const double p = std::norm(c.g[i]);
    return 2.0 * c.n * c.a * p * (c.direct(1) - c.sigma * c.par[i] * c.cross(1)) / k;
}

double sacs_energy(const ModelParams& params, const SacsPoint& sp)
{
    const Ctx c(sp);
    const double k = c.checked_kernel();
    const OneBody ob = one_body_scaled(c);
    double num = params.field_freq * ob.photons;
    for (int i = 0; i < 3; ++i)
        num += params.level_energy[i] * ob.populations[i];
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(c.n));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double mu = params.coupling(i, j);
            if (mu == 0.0)
                continue;
            const InteractionTerms it = interaction_scaled(c, i, j);
            // RWA keeps A_ij a^dag + A_ji a (i < j), whose expectation is 2 Re <A_ji a>
            const double term = params.rwa ? 2.0 * it.a_ji_a.real() : it.dipole;
            num -= mu * inv_sqrt_n * term;
        }
    return num / k;
}

ObservableReport sacs_report(const ModelParams& params, const SacsPoint& sp)
{
    ObservableReport r;
    r.energy = sacs_energy(params, sp);
    const OneBody ob = expect_one_body(sp);
    const TwoBody tb = expect_two_body(sp);
    const MMoments m = expect_m_moments(sp);
    r.n_photons = ob.photons;
    r.var_photons = std::max(0.0, tb.photons_sq - ob.photons * ob.photons);
    for (int i = 0; i < 3; ++i) {
        r.populations[i] = ob.populations[i];
        r.var_populations[i] = std::max(0.0, tb.populations_sq[i] - ob.populations[i] * ob.populations[i]);
    }
    r.m_excitations = m.mean;
    r.var_m = m.variance;
    return r;
}

std::array<double, 2> parity_weights(const CoherentPoint& pt, AtomicConfiguration config, int n_atoms)
{
    const Ctx even(SacsPoint{pt, ParityBranch::Even, config, n_atoms});
    const Ctx odd(SacsPoint{pt, ParityBranch::Odd, config, n_atoms});
    return {even.kernel_scaled() / 4.0, odd.kernel_scaled() / 4.0};
}

int ReducedDensityMatrix::index(int n2, int n3, int n_atoms)
{
    // rows for n2' < n2 hold (N_a + 1 - n2') entries each
    return n2 * (n_atoms + 1) - n2 * (n2 - 1) / 2 + n3;
}

ReducedDensityMatrix reduced_density_matrix(const SacsPoint& sp)
{
    const Ctx c(sp);
    const double k = c.checked_kernel();
    const int n = c.n;
    const int dim = ReducedDensityMatrix::dimension(n);

    std::vector<cplx> amp(dim);
    std::vector<int> parity(dim);
    const double log_norm = 0.5 * n * std::log(c.gnorm);
    for (int n2 = 0; n2 <= n; ++n2)
        for (int n3 = 0; n2 + n3 <= n; ++n3) {
            const int idx = ReducedDensityMatrix::index(n2, n3, n);
            const double log_mult = std::lgamma(n + 1.0) - std::lgamma(n - n2 - n3 + 1.0)
                                    - std::lgamma(n2 + 1.0) - std::lgamma(n3 + 1.0);
            amp[idx] = std::exp(0.5 * log_mult - log_norm) * std::pow(c.g[1], n2) * std::pow(c.g[2], n3);
            parity[idx] = ((c.lam[1] * n2 + c.lam[2] * n3) % 2 == 0) ? 1 : -1;
        }

    const double e2a = std::exp(-2.0 * c.a);
    const double minus = -std::expm1(-2.0 * c.a);  // 1 - exp(-2a)
    ReducedDensityMatrix out;
    out.n_atoms = n;
    out.rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const double field = c.sigma * parity[r] > 0 ? 1.0 + e2a : minus;
        for (int q = 0; q < dim; ++q) {
            if (parity[r] != parity[q])
                continue;
            out.rho(r, q) = 2.0 * field * amp[r] * std::conj(amp[q]) / k;
        }
    }
    return out;
}

double linear_entropy(const ReducedDensityMatrix& rdm)
{
    return 1.0 - rdm.rho.cwiseAbs2().sum();
}

double linear_entropy(const SacsPoint& sp)
{
    return linear_entropy(reduced_density_matrix(sp));
}

CriticalPoint minimize_sacs_energy(const ModelParams& params, ParityBranch branch,
                                   const CriticalPoint& start, const NelderMeadOptions& opts)
{
    const Objective f = [&](std::span<const double> x) {
        SacsPoint sp{CoherentPoint{{x[0], 0.0}, {x[1], 0.0}, {x[2], 0.0}}, branch, params.config,
                     params.n_atoms};
        try {
            return sacs_energy(params, sp);
        } catch (const DegenerateState&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    auto res = nelder_mead(f, {start.rho, start.rho2, start.rho3}, opts);
    CriticalPoint cp;
    cp.rho = std::abs(res.x[0]);
    cp.rho2 = std::abs(res.x[1]);
    cp.rho3 = std::abs(res.x[2]);
    cp.energy = res.value;
    const double h = 1e-4 * std::max({1.0, cp.rho, cp.rho2, cp.rho3});
    const Eigen::MatrixXd hess = fd_hessian(f, std::span<const double>(res.x), h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    cp.min_hessian_eigenvalue = es.eigenvalues()(0);
    cp.hessian_positive = cp.min_hessian_eigenvalue > 1e-8 * std::max(1.0, std::abs(cp.energy));
    return cp;
}

}  // namespace qsacs
