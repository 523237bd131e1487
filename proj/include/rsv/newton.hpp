#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rsv {

struct NewtonOptions {
    double tol = 1e-11;     // on the infinity norm of the residual
    int max_iters = 60;
    double divergence = 1e6;  // abandon once any unknown exceeds this in magnitude
    int polish_iters = 3;     // extra steps after reaching tol while ||F|| keeps falling
};

struct NewtonOutcome {
    Eigen::VectorXd u;
    double residual = 0.0;  // infinity norm at u
    int iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Gauss-Newton for possibly over- or under-determined systems: minimum-norm
// steps from a complete orthogonal decomposition, backtracking on ||F||_2 and a
// Levenberg-Marquardt fallback when the full step direction fails to descend.
// Throws SingularJacobian on a zero-rank or non-finite Jacobian.
NewtonOutcome least_squares_newton(const ResidualFn& f, const JacobianFn& jac,
                                   Eigen::VectorXd u0, const NewtonOptions& opts);

// Jacobian of a real-analytic function by the complex-step method; exact to
// rounding. `f` must accept complex arguments.
using ComplexResidualFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;
Eigen::MatrixXd complex_step_jacobian(const ComplexResidualFn& f, const Eigen::VectorXd& u);

}  // namespace rsv
