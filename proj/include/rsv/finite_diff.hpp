#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rsv {

// Vector-valued function of a point; metric and connection suppliers are
// flattened into this shape before differentiation.
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct FdOptions {
    // Step along coordinate i is base_step * max(1, |p_i|).
    double base_step = 2e-3;
    // Accepted error estimate, relative to the magnitude of the function and
    // of the derivative.
    double rel_tol = 1e-7;
    // Number of times the step is divided by 4 when the estimate is too large.
    int max_refinements = 3;
    // Best estimate above this (same scaling) raises DifferentiationFailure.
    double fail_tol = 1e-5;
};

struct FdResult {
    Eigen::VectorXd value;
    double error_estimate = 0.0;
    double step = 0.0;
};

// Central difference d f / d p_i with one level of Richardson extrapolation.
// Throws DifferentiationFailure when no step meets `opts.rel_tol`.
FdResult first_derivative(const VectorField& f, const Eigen::VectorXd& p, int i,
                          const FdOptions& opts = {});

// Central second difference d^2 f / d p_i d p_j (i == j allowed), one level of
// Richardson extrapolation.
FdResult second_derivative(const VectorField& f, const Eigen::VectorXd& p, int i, int j,
                           const FdOptions& opts = {});

}  // namespace rsv
