#include "rsv/newton.hpp"

#include <cmath>
#include <limits>

#include "rsv/errors.hpp"

namespace rsv {

namespace {

// Relative singular-value cutoff. Solution families make the Jacobian
// rank-deficient, and rounding lifts those null directions to ~1e-12 of the
// largest value; steps along them must be dropped, not amplified.
constexpr double kRankThreshold = 1e-9;

// Full Newton steps past the tolerance, kept only while they reduce ||F||.
void polish(const ResidualFn& f, const JacobianFn& jac, Eigen::VectorXd& u, Eigen::VectorXd& r, int iters) {
    for (int k = 0; k < iters; ++k) {
        const Eigen::MatrixXd J = jac(u);
        if (!J.allFinite()) return;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        cod.setThreshold(kRankThreshold);
        cod.compute(J);
        const Eigen::VectorXd trial = u - cod.solve(r);
        const Eigen::VectorXd rt = f(trial);
        if (!rt.allFinite() || rt.norm() >= r.norm()) return;
        u = trial;
        r = rt;
    }
}

}  // namespace

NewtonOutcome least_squares_newton(const ResidualFn& f, const JacobianFn& jac,
                                   Eigen::VectorXd u, const NewtonOptions& opts) {
    NewtonOutcome out;
    Eigen::VectorXd r = f(u);
    for (int it = 0;; ++it) {
        out.iterations = it;
        out.residual = r.allFinite() ? r.lpNorm<Eigen::Infinity>()
                                     : std::numeric_limits<double>::infinity();
        if (out.residual < opts.tol) {
            out.converged = true;
            polish(f, jac, u, r, opts.polish_iters);
            out.residual = r.lpNorm<Eigen::Infinity>();
            break;
        }
        if (it >= opts.max_iters || !std::isfinite(out.residual) ||
            u.lpNorm<Eigen::Infinity>() > opts.divergence)
            break;

        const Eigen::MatrixXd J = jac(u);
        if (!J.allFinite()) throw SingularJacobian("Jacobian has non-finite entries");
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        cod.setThreshold(kRankThreshold);
        cod.compute(J);
        if (cod.rank() == 0) throw SingularJacobian("Jacobian has rank zero");
        const Eigen::VectorXd step = -cod.solve(r);

        const double norm0 = r.norm();
        bool accepted = false;
        for (double t = 1.0; t > 1e-4; t *= 0.5) {
            const Eigen::VectorXd trial = u + t * step;
            const Eigen::VectorXd rt = f(trial);
            if (rt.allFinite() && rt.norm() < norm0) {
                u = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            const Eigen::MatrixXd JtJ = J.transpose() * J;
            const Eigen::VectorXd g = J.transpose() * r;
            double lambda = 1e-6 * std::max(1.0, JtJ.diagonal().maxCoeff());
            for (int k = 0; k < 12 && !accepted; ++k, lambda *= 10.0) {
                Eigen::MatrixXd A = JtJ;
                A.diagonal().array() += lambda;
                const Eigen::VectorXd lm = -A.ldlt().solve(g);
                const Eigen::VectorXd trial = u + lm;
                const Eigen::VectorXd rt = f(trial);
                if (rt.allFinite() && rt.norm() < norm0) {
                    u = trial;
                    r = rt;
                    accepted = true;
                }
            }
        }
        if (!accepted) break;  // stagnated away from a root
    }
    out.u = std::move(u);
    return out;
}

Eigen::MatrixXd complex_step_jacobian(const ComplexResidualFn& f, const Eigen::VectorXd& u) {
    constexpr double h = 1e-30;
    const Eigen::VectorXcd base = u.cast<std::complex<double>>();
    Eigen::MatrixXd J;
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        Eigen::VectorXcd v = base;
        v[k] += std::complex<double>(0.0, h);
        const Eigen::VectorXcd fv = f(v);
        if (J.size() == 0) J.resize(fv.size(), u.size());
        J.col(k) = fv.imag() / h;
    }
    return J;
}

}  // namespace rsv
