#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>

#include "rsv/geometry.hpp"
#include "rsv/tensor.hpp"

namespace rsv {

using Complex = std::complex<double>;
using NPScalars = std::array<Complex, 5>;

double inner(const Eigen::MatrixXd& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// R_{ik} = g^{hj} R_{hijk}
Eigen::MatrixXd ricci(const CurvatureData& cd);
double ricci_scalar(const CurvatureData& cd);

// A_{abcd} B^{abcd}, indices of B raised with g_inv.
double full_contraction(const Tensor4& a, const Tensor4& b, const Eigen::MatrixXd& g_inv);

double kretschmann(const CurvatureData& cd);

// Trace-free part of R_{ijkl}:
//   R = C - (R_il g_jk - R_ik g_jl + g_il R_jk - g_ik R_jl) / (n-2)
//         + R (g_il g_jk - g_ik g_jl) / ((n-1)(n-2))
// Throws DimensionTooSmall for n < 3.
Tensor4 weyl(const CurvatureData& cd);

// The trace terms above; weyl(cd) + weyl_trace_part(cd) reproduces R_{ijkl}.
Tensor4 weyl_trace_part(const CurvatureData& cd);

// Null tetrad (l, n, m, conj(m)) in coordinate components. Normalization is
// l.n = ln_product (default -1 for signature -+++) and m.conj(m) = 1, all
// other products zero.
struct NPTetrad {
    Eigen::VectorXd l;
    Eigen::VectorXd n;
    Eigen::VectorXcd m;
    double ln_product = -1.0;
};

// Largest deviation of the tetrad inner products from their required values.
double tetrad_defect(const Eigen::MatrixXd& g, const NPTetrad& tetrad);

// Weyl scalars Psi_0..Psi_4. Sign fixed so that the Kinnersley tetrad on Kerr
// yields Psi_2 = M / (r - i a cos(theta))^3. Throws BadTetrad when the tetrad
// defect exceeds 1e-8, DimensionTooSmall unless n = 4.
NPScalars np_scalars(const CurvatureData& cd, const NPTetrad& tetrad);

// I = Psi0 Psi4 - 4 Psi1 Psi3 + 3 Psi2^2
Complex invariant_I(const NPScalars& psi);

struct InvariantReport {
    double ricci_scalar = 0.0;
    double kretschmann = 0.0;
    std::optional<double> weyl_contraction;  // C_{ijkl} C^{ijkl}, signed
    std::optional<double> weyl_norm;         // sqrt of the above when non-negative
    std::optional<NPScalars> np;
    std::optional<Complex> invariant_I;
};

InvariantReport invariants(const CurvatureData& cd,
                           const std::optional<NPTetrad>& tetrad = std::nullopt);

}  // namespace rsv
