#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace qsacs {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    double ftol = 1e-12;        // simplex value spread, relative to max(1, |f|)
    double xtol = 1e-8;         // simplex diameter
    int max_iterations = 20000;
    double initial_step = 0.25;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Deterministic downhill simplex. Converged means both the value spread and
// the simplex diameter are below tolerance.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& opts = {});

// Central finite-difference hessian.
Eigen::MatrixXd fd_hessian(const Objective& f, std::span<const double> x, double h);

}  // namespace qsacs
