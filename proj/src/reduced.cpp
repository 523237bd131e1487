#include "rsv/reduced.hpp"

#include <cmath>
#include <numbers>

#include "rsv/catalog.hpp"
#include "rsv/errors.hpp"
#include "rsv/newton.hpp"

namespace rsv {
namespace {

constexpr double kReducedTol = 1e-14;

void require_angle(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi))
        throw OutOfDomain("theta must lie strictly between 0 and pi");
}

}  // namespace

ReducedSolveResult schwarzschild_reduced_solve(double M, double r, double theta) {
    if (!(M > 0.0) || !std::isfinite(M)) throw OutOfDomain("Schwarzschild needs M > 0");
    if (!(r > 2.0 * M) || !std::isfinite(r)) throw OutOfDomain("Schwarzschild needs r > 2M");
    require_angle(theta);

    const auto [A, B, C, D] = schwarzschild_coefficients(M, r, theta);
    const double f = 1.0 - 2.0 * M / r;
    const double k = r * r * r / M;  // 2 r^3 / r_s

    // Unknowns (x0..x3, y0..y3, sigma).
    ComplexResidualFn F = [=](const Eigen::VectorXcd& u) {
        const auto x = u.segment(0, 4), y = u.segment(4, 4);
        const std::complex<double> s = u[8];
        Eigen::VectorXcd out(10);
        auto block = [&](auto a, auto b, int at) {
            out[at + 0] = C * a[2] * b[0] * b[2] + D * a[3] * b[0] * b[3] - 0.5 * s * a[0];
            out[at + 1] = C * a[2] * b[1] * b[2] + D * a[3] * b[1] * b[3] - 0.5 * s * a[1];
            out[at + 2] = -A * a[0] * b[0] * b[2] + B * a[1] * b[1] * b[2] - 0.5 * s * a[2];
            out[at + 3] = -A * a[0] * b[0] * b[3] + B * a[1] * b[1] * b[3] - 0.5 * s * a[3];
        };
        block(x, y, 0);
        block(y, x, 4);
        auto norm = [&](auto v) {
            return k * (-A * v[0] * v[0] + B * v[1] * v[1] + C * v[2] * v[2] + D * v[3] * v[3]) - 1.0;
        };
        out[8] = norm(x);
        out[9] = norm(y);
        return out;
    };
    ResidualFn Freal = [&](const Eigen::VectorXd& u) {
        return Eigen::VectorXd(F(u.cast<std::complex<double>>()).real());
    };
    JacobianFn J = [&](const Eigen::VectorXd& u) { return complex_step_jacobian(F, u); };

    // Perturbed start near the radial-angular family x = y.
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::VectorXd u0(9);
    u0 << 0.02, std::sqrt(f) * h * 1.05, h / r * 0.97, 0.01 / r, 0.01, std::sqrt(f) * h * 0.96,
        h / r * 1.03, -0.02 / r, 0.8 * M / (r * r * r);
    NewtonOptions opts;
    opts.tol = kReducedTol * std::max(1.0, 1.0 / (r * r));
    const NewtonOutcome res = least_squares_newton(Freal, J, u0, opts);
    if (!res.converged)
        throw NoConvergence("Schwarzschild reduced system did not converge (residual " +
                            std::to_string(res.residual) + ")");

    const Eigen::Vector4d x = res.u.segment(0, 4), y = res.u.segment(4, 4);
    double sigma = res.u[8];
    SVPSolution sol;
    sol.q.x = x;
    sol.q.y = y;
    sol.q.w = Eigen::Vector4d(x[0], x[1], -x[2], -x[3]);
    sol.q.z = Eigen::Vector4d(y[0], y[1], -y[2], -y[3]);
    sol.q.signs = kAllPlus;
    if (sigma < 0.0) {
        sol.q.w = -sol.q.w;
        sigma = -sigma;
    }
    sol.sigma = sigma;
    sol.origin = SolutionOrigin::ReducedSchwarzschild;
    sol.label = "y = z up to angular signs";

    const CatalogEntry entry = schwarzschild(M);
    Point p(4);
    p << 0.0, r, theta, 0.0;
    const CurvatureData cd = riemann(entry.spec, p);

    ReducedSolveResult out;
    out.reduced_residual = res.residual;
    out.full_residual = residual_norm(cd, sol.q, sol.sigma);
    sol.residual = out.full_residual;
    out.solution = sol;
    out.det_identity_defect = schwarzschild_det_defect(sol.q.y, sol.q.z);
    out.kretschmann = kretschmann(cd);
    return out;
}

ReducedSolveResult kerr_reduced_solve(double M, double a, double r, double theta) {
    if (!(M > 0.0) || !std::isfinite(M)) throw OutOfDomain("Kerr needs M > 0");
    if (!(a >= 0.0 && a < M)) throw OutOfDomain("Kerr needs 0 <= a < M");
    const double r_plus = M + std::sqrt(M * M - a * a);
    if (!(r > r_plus) || !std::isfinite(r)) throw OutOfDomain("Kerr needs r outside the outer horizon");
    require_angle(theta);

    const CatalogEntry entry = kerr(M, a);
    Point p(4);
    p << 0.0, r, theta, 0.0;
    const CurvatureData cd = riemann(entry.spec, p);
    const NPTetrad tet = entry.tetrad(p);
    const NPScalars psi = np_scalars(cd, tet);
    const double P = 2.0 * psi[2].real();  // Psi_2 + conj(Psi_2)

    // Unknowns (x1, x2, Re x3, Im x3, sigma); x4 = conj(x3).
    ComplexResidualFn F = [=](const Eigen::VectorXcd& u) {
        const auto x3x4 = u[2] * u[2] + u[3] * u[3];
        Eigen::VectorXcd out(3);
        out[0] = 2.0 * x3x4 * P - u[4];
        out[1] = 2.0 * u[0] * u[1] * P + u[4];
        out[2] = -2.0 * u[0] * u[1] + 2.0 * x3x4 - 1.0;
        return out;
    };
    ResidualFn Freal = [&](const Eigen::VectorXd& u) {
        return Eigen::VectorXd(F(u.cast<std::complex<double>>()).real());
    };
    JacobianFn J = [&](const Eigen::VectorXd& u) { return complex_step_jacobian(F, u); };
    Eigen::VectorXd u0(5);
    u0 << 0.6, -0.4, 0.5, 0.2, 0.5 * P;
    NewtonOptions opts;
    opts.tol = kReducedTol;
    const NewtonOutcome res = least_squares_newton(Freal, J, u0, opts);
    if (!res.converged)
        throw NoConvergence("Kerr reduced system did not converge (residual " +
                            std::to_string(res.residual) + ")");

    const double x1 = res.u[0], x2 = res.u[1];
    const Complex x3(res.u[2], res.u[3]);
    const Eigen::VectorXd mpart = 2.0 * (x3 * tet.m).real();
    SVPSolution sol;
    sol.q.x = x1 * tet.l + x2 * tet.n + mpart;
    sol.q.y = x1 * tet.l + x2 * tet.n - mpart;
    sol.q.z = sol.q.x;
    sol.q.w = -sol.q.y;
    sol.q.signs = kAllPlus;
    double sigma = res.u[4];
    if (sigma < 0.0) {
        sol.q.w = -sol.q.w;
        sigma = -sigma;
    }
    sol.sigma = sigma;
    sol.origin = SolutionOrigin::ReducedKerr;
    sol.label = "Z = X, W = -Y";

    ReducedSolveResult out;
    out.reduced_residual = res.residual;
    out.full_residual = residual_norm(cd, sol.q, sol.sigma);
    sol.residual = out.full_residual;
    out.solution = sol;
    out.kretschmann = kretschmann(cd);
    out.psi2 = psi[2];
    out.invariant_I = invariant_I(psi);
    out.tetrad_components = std::array<Complex, 3>{Complex(x1), Complex(x2), x3};
    return out;
}

}  // namespace rsv
