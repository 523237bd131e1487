#pragma once

#include <optional>

#include "rsv/algebra.hpp"
#include "rsv/svp.hpp"

namespace rsv {

struct ReducedSolveResult {
    // Quadruple in coordinate components (t, r, theta, phi); sigma >= 0.
    SVPSolution solution;
    double reduced_residual = 0.0;  // infinity norm of the reduced system at the root
    double full_residual = 0.0;     // full 4n + 4 system against the point's curvature
    double det_identity_defect = 0.0;  // Schwarzschild only
    double kretschmann = 0.0;
    std::optional<Complex> psi2;       // Kerr only, from the numeric curvature
    std::optional<Complex> invariant_I;
    // Kerr only: (x1, x2, x3) with X = x1 l + x2 n + x3 m + conj(x3) conj(m).
    std::optional<std::array<Complex, 3>> tetrad_components;
};

// Reduced system in (x, y, sigma) with W, Z the angular reflections of X, Y.
// Throws OutOfDomain unless M > 0, r > 2M and 0 < theta < pi.
ReducedSolveResult schwarzschild_reduced_solve(double M, double r, double theta);

// Special family Z = X, W = -Y in the Kinnersley tetrad, solved with Psi_2
// taken from the numeric curvature. Throws OutOfDomain unless M > 0,
// 0 <= a < M, r is outside the outer horizon and 0 < theta < pi.
ReducedSolveResult kerr_reduced_solve(double M, double a, double r, double theta);

}  // namespace rsv
