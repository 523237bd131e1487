#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rsv/finite_diff.hpp"
#include "rsv/tensor.hpp"

namespace rsv {

// Chart coordinates of a point.
using Point = Eigen::VectorXd;

// Index conventions used throughout:
//   gamma(l, i, k)            = Gamma^l_{ik}
//   riemann_mixed(l, k, i, j) = R^l_{kij}, with R(d_i, d_j) d_k = R^l_{kij} d_l
//   riemann_lowered(i,j,k,l)  = R_{ijkl} = g_{ih} R^h_{jkl} = <d_i, R(d_k, d_l) d_j>
// so that R(W, X, Y, Z) = <W, R(Y, Z) X> = R_{ijkl} w^i x^j y^k z^l.
// Exact derivatives of g: first[i] = d_i g, second[i][j] = d_i d_j g.
struct MetricDerivatives {
    std::vector<Eigen::MatrixXd> first;
    std::vector<std::vector<Eigen::MatrixXd>> second;
};

struct MetricSpec {
    std::string id;
    int dimension = 0;
    std::vector<int> signature;  // +1 / -1 per eigen-direction
    std::function<Eigen::MatrixXd(const Point&)> metric;
    std::function<Tensor3(const Point&)> analytic_gamma;    // optional
    std::function<Tensor4(const Point&)> analytic_riemann;  // optional, mixed R^l_{kij}
    // Optional; replaces finite differences of `metric` on the derivative path.
    // Curvature built this way is still reported as Numeric.
    std::function<MetricDerivatives(const Point&)> metric_derivatives;

    int negative_count() const;
    bool is_lorentzian() const { return negative_count() == 1; }
};

enum class CurvatureSource { Analytic, Numeric };

// Which route `riemann` takes. Auto prefers analytic suppliers and exact metric
// derivatives when present; Numeric always differentiates the metric by finite
// differences.
enum class DerivativePath { Auto, Numeric };

struct SymmetryReport {
    double metric_asymmetry = 0.0;   // max |g_ij - g_ji|
    double first_pair = 0.0;         // max |R_ijkl + R_jikl|
    double second_pair = 0.0;        // max |R_ijkl + R_ijlk|
    double pair_exchange = 0.0;      // max |R_ijkl - R_klij|
    double bianchi = 0.0;            // max |R_ijkl + R_iljk + R_iklj|
    double scale = 1.0;              // max(1, max |R_ijkl|); defects are compared against tol * scale
    double tol = 0.0;

    double max_symmetry_defect() const;
    bool symmetries_pass() const { return max_symmetry_defect() <= tol * scale; }
    bool bianchi_pass() const { return bianchi <= tol * scale; }
    bool pass() const { return symmetries_pass() && bianchi_pass(); }
};

struct CurvatureData {
    Point point;
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    Tensor3 gamma;
    Tensor4 riemann_mixed;
    Tensor4 riemann_lowered;
    CurvatureSource source = CurvatureSource::Analytic;
    // Diagnostic computed at construction against 1e-6; set when the
    // differentiation step produced a tensor that visibly breaks the symmetries.
    SymmetryReport symmetry;
    bool symmetry_violation = false;

    int dim() const { return static_cast<int>(g.rows()); }
};

// Throws SingularMetric when |det g| < 1e-14 * (max |g_ij|)^n or g is not
// finite, SignatureMismatch when the eigenvalue signs of the symmetric part
// disagree with `spec.signature`.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> metric_at(const MetricSpec& spec, const Point& p);

// Gamma^l_{ik} from g^{-1} and first derivatives dg[i] = d_i g.
Tensor3 gamma_from_derivatives(const Eigen::MatrixXd& g_inv, const std::vector<Eigen::MatrixXd>& dg);

Tensor3 christoffel(const MetricSpec& spec, const Point& p,
                    DerivativePath path = DerivativePath::Auto, const FdOptions& fd = {});

CurvatureData riemann(const MetricSpec& spec, const Point& p,
                      DerivativePath path = DerivativePath::Auto, const FdOptions& fd = {});

// Lowers R^h_{jkl} with g.
Tensor4 lower_first_index(const Eigen::MatrixXd& g, const Tensor4& mixed);

SymmetryReport verify_tensor_symmetries(const CurvatureData& cd, double tol);
SymmetryReport verify_tensor_symmetries(const Tensor4& lowered, double tol);

// Independent components of an algebraic curvature tensor: R(A, B) over
// bivectors A <= B (pairs i < j in lexicographic order), dropping R(ik, jl)
// for every i < j < k < l since the cyclic identity fixes it. n = 4 gives 20.
std::vector<double> independent_components(const Tensor4& lowered);
Tensor4 reconstruct_from_independent(int n, const std::vector<double>& values);
int independent_component_count(int n);

}  // namespace rsv
