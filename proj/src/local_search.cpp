#include "qsacs/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qsacs {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

double diameter(const std::vector<Vertex>& simplex)
{
    double d = 0.0;
    const auto& best = simplex.front().x;
    for (std::size_t v = 1; v < simplex.size(); ++v)
        for (std::size_t k = 0; k < best.size(); ++k)
            d = std::max(d, std::abs(simplex[v].x[k] - best[k]));
    return d;
}

void sort_simplex(std::vector<Vertex>& simplex)
{
    // stable: ties keep insertion order so runs are reproducible
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& opts)
{
    const std::size_t n = start.size();
    auto eval = [&](const std::vector<double>& x) { return f(std::span<const double>(x)); };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({start, eval(start)});
    for (std::size_t k = 0; k < n; ++k) {
        auto x = start;
        x[k] += opts.initial_step;
        simplex.push_back({x, eval(x)});
    }
    sort_simplex(simplex);

    NelderMeadResult res;
    std::vector<double> centroid(n), trial(n);
    auto along = [&](double t) {
        // centroid + t (centroid - worst)
        const auto& worst = simplex.back().x;
        for (std::size_t k = 0; k < n; ++k)
            trial[k] = centroid[k] + t * (centroid[k] - worst[k]);
        return eval(trial);
    };

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const double fbest = simplex.front().f;
        const double spread = simplex.back().f - fbest;
        if (spread <= opts.ftol * std::max(1.0, std::abs(fbest)) && diameter(simplex) <= opts.xtol) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t k = 0; k < n; ++k)
                centroid[k] += simplex[v].x[k] / static_cast<double>(n);

        const double fr = along(1.0);
        if (fr < simplex.front().f) {
            auto xr = trial;
            const double fe = along(2.0);
            if (fe < fr)
                simplex.back() = {trial, fe};
            else
                simplex.back() = {xr, fr};
        } else if (fr < simplex[n - 1].f) {
            simplex.back() = {trial, fr};
        } else {
            const bool outside = fr < simplex.back().f;
            const double fc = along(outside ? 0.5 : -0.5);
            if (outside ? fc <= fr : fc < simplex.back().f) {
                simplex.back() = {trial, fc};
            } else {
                const auto best = simplex.front().x;
                for (std::size_t v = 1; v <= n; ++v) {
                    for (std::size_t k = 0; k < n; ++k)
                        simplex[v].x[k] = best[k] + 0.5 * (simplex[v].x[k] - best[k]);
                    simplex[v].f = eval(simplex[v].x);
                }
            }
        }
        sort_simplex(simplex);
    }

    res.x = simplex.front().x;
    res.value = simplex.front().f;
    res.iterations = it;
    return res;
}

Eigen::MatrixXd fd_hessian(const Objective& f, std::span<const double> x, double h)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    std::vector<double> p(x.begin(), x.end());
    auto at = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
        auto q = p;
        q[i] += di;
        q[j] += dj;
        return f(std::span<const double>(q));
    };
    const double f0 = f(std::span<const double>(p));
    Eigen::MatrixXd hess(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        hess(i, i) = (at(i, h, i, 0.0) - 2.0 * f0 + at(i, -h, i, 0.0)) / (h * h);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h))
                             / (4.0 * h * h);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess;
}

}  // namespace qsacs
