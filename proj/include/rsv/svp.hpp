#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsv/geometry.hpp"

namespace rsv {

// Right-hand sides of <W,W>, <X,X>, <Y,Y>, <Z,Z>; each +1 or -1.
using SignPattern = std::array<int, 4>;

constexpr SignPattern kAllPlus{1, 1, 1, 1};

std::string to_string(const SignPattern& s);
// Parses "++++", "+++-", ... (also accepts ASCII '-' or the minus sign).
SignPattern parse_sign_pattern(const std::string& text);

struct Quadruple {
    Eigen::VectorXd w, x, y, z;
    SignPattern signs = kAllPlus;

    int dim() const { return static_cast<int>(w.size()); }
    Eigen::VectorXd stacked() const;
};

enum class SolutionOrigin { Multistart, Analytic, ReducedSchwarzschild, ReducedKerr, Orbit, MEigen };
std::string to_string(SolutionOrigin o);

struct SVPSolution {
    Quadruple q;
    double sigma = 0.0;
    double residual = 0.0;  // infinity norm of the system the producer solved
    SolutionOrigin origin = SolutionOrigin::Multistart;
    std::uint64_t seed = 0;
    bool trivial = false;  // sigma = 0 with W = +-X or Y = +-Z
    std::string label;
};

struct SolverConfig {
    double tol = 1e-11;
    int max_newton_iters = 60;
    int n_starts = 200;
    double cluster_eps = 1e-7;
    std::optional<SignPattern> signs = kAllPlus;  // nullopt: enumerate all 16 patterns
    std::uint64_t rng_seed = 0;
    int threads = 0;  // 0: hardware concurrency, capped at 8
};

// R(W, X, Y, Z) = R_{ijkl} w^i x^j y^k z^l
double curvature_form(const CurvatureData& cd, const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& z);

// Stationarity system, length 4n + 4:
//   R(Y,Z)X - sigma W, R(Z,Y)W - sigma X, R(W,X)Z - sigma Y, R(X,W)Y - sigma Z,
//   <W,W> - s_w, <X,X> - s_x, <Y,Y> - s_y, <Z,Z> - s_z.
Eigen::VectorXd residual(const CurvatureData& cd, const Quadruple& q, double sigma);
double residual_norm(const CurvatureData& cd, const Quadruple& q, double sigma);

// d residual / d (w, x, y, z, sigma), shape (4n + 4) x (4n + 1).
Eigen::MatrixXd residual_jacobian(const CurvatureData& cd, const Quadruple& q, double sigma);

// Newton from (q0, sigma0). On success sigma >= 0 (W is negated when needed).
// Throws NoConvergence or SingularJacobian.
SVPSolution solve_newton(const CurvatureData& cd, const Quadruple& q0, double sigma0,
                         const SolverConfig& cfg);

// Feasible random start: Gaussian vectors rescaled onto <v,v> = s_v. Returns
// nullopt when the pattern cannot be sampled (e.g. negative norms on a
// Riemannian metric).
std::optional<Quadruple> random_start(const CurvatureData& cd, const SignPattern& signs,
                                      std::uint64_t seed);

// A member of the sigma = 0 family (X, X, Y, Y) built from a random start.
// Needs s_w = s_x and s_y = s_z; returns nullopt otherwise.
std::optional<SVPSolution> trivial_solution(const CurvatureData& cd, const SignPattern& signs,
                                            std::uint64_t seed);

struct SVPCluster {
    double sigma = 0.0;
    SignPattern signs = kAllPlus;
    SVPSolution representative;
    int members = 0;
    int distinct_orbits = 0;
    bool trivial = false;
};

struct MultistartResult {
    std::vector<SVPCluster> clusters;  // ordered by sign pattern, then sigma
    int starts = 0;
    int converged = 0;
    // Starts are a search: for pseudo-Riemannian metrics the sigma set found is
    // not claimed complete.
    bool exhaustive = false;

    std::vector<double> sigmas(double min_abs = 0.0) const;
    const SVPCluster* nonzero(double eps = 1e-8) const;
};

MultistartResult multistart(const CurvatureData& cd, const SolverConfig& cfg);

// Transforms that map solutions to solutions: the 16 sign flips, the 7 pair
// exchanges, and the three 45-degree rotations (emitted only when sigma != 0
// and the rotated pair has equal signs). Each carries its own residual.
// Throws InvalidInput when the input's residual is not below `tol`.
std::vector<SVPSolution> orbit(const SVPSolution& sol, const CurvatureData& cd, double tol);

// True iff sigma = 0 or both <W,X> and <Y,Z> are below 1e-8 in magnitude.
bool check_proposition1(const SVPSolution& sol, const Eigen::MatrixXd& g);

// W = Y, X = Z reduction: R(Y,Z)Z = sigma Y, R(Z,Y)Y = sigma Z. Returns one
// embedded solution per sigma cluster (origin MEigen).
std::vector<SVPSolution> meigen_reduce(const CurvatureData& cd, const SolverConfig& cfg);

struct LorentzCheckReport {
    SignPattern signs{1, 1, 1, -1};
    int starts = 0;
    int converged = 0;
    double max_abs_sigma = 0.0;
    bool pass = false;  // converged > 0 and max |sigma| < 1e-8
};

// Throws WrongSignature unless the metric has exactly one negative eigenvalue.
LorentzCheckReport lorentz_mixed_sign_check(const CurvatureData& cd, const SolverConfig& cfg,
                                            const SignPattern& signs = {1, 1, 1, -1});

enum class ClosedFormCase { SpaceForm, MEigenConformal, RicciEigenpairs, Einstein };

struct ClosedFormParams {
    std::optional<double> kappa;          // SpaceForm: sectional; Einstein: R_ij = kappa g_ij
    std::optional<double> ricci_scalar;   // R
    std::optional<int> n;
    std::optional<double> lambda, mu;     // Ricci eigenvalues (RicciEigenpairs)
    std::optional<double> ricci_ww, ricci_xx;  // R_ik w^i w^k, R_jl x^j x^l (MEigenConformal)
};

// SpaceForm: |kappa|. Conformally flat cases (n >= 3), signed:
//   MEigenConformal: (R_ww + R_xx - R/(n-1)) / (n-2)
//   RicciEigenpairs: (lambda + mu - R/(n-1)) / (n-2)
//   Einstein:        (2 kappa - R/(n-1)) / (n-2)
// Throws BadCase on missing or inconsistent parameters.
double closed_form_sigma(ClosedFormCase c, const ClosedFormParams& p);

// Property checks; each returns the largest defect.
double proposition1_defect(const SVPSolution& sol, const Eigen::MatrixXd& g);
// kappa<Z,X> = sigma<W,Y>, -kappa<Y,X> = sigma<W,Z>, -kappa<Z,W> = sigma<X,Y>,
// kappa<Y,W> = sigma<X,Z>, and <W,Y>^2 + <W,Z>^2 = 1.
double space_form_identity_defect(const SVPSolution& sol, const Eigen::MatrixXd& g, double kappa);
// |R_ww + R_xx - R_yy - R_zz| with R_ij the Ricci tensor.
double ricci_quadratic_defect(const SVPSolution& sol, const CurvatureData& cd);
// Relative defect of det(S) = -(2S01 2S23 + S20 S13 + S30 S21)^2, S^ij = y^i z^j - y^j z^i.
double schwarzschild_det_defect(const Eigen::VectorXd& y, const Eigen::VectorXd& z);
// |sigma - s_w R(W,X,Y,Z)|.
double sigma_form_defect(const SVPSolution& sol, const CurvatureData& cd);

}  // namespace rsv
