#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the library's differentiation or contraction code.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using MetricFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Plain n^3 / n^4 arrays indexed [a][b][c] / [a][b][c][d].
using Arr3 = std::vector<std::vector<std::vector<double>>>;
using Arr4 = std::vector<Arr3>;

inline Arr3 zeros3(int n) { return Arr3(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))); }
inline Arr4 zeros4(int n) { return Arr4(n, zeros3(n)); }

// Fourth-order central difference of a matrix-valued function.
template <class F>
auto d4(const F& f, const Eigen::VectorXd& p, int i, double h) {
    Eigen::VectorXd a = p, b = p, c = p, d = p;
    a[i] += 2 * h;
    b[i] += h;
    c[i] -= h;
    d[i] -= 2 * h;
    return ((-f(a) + 8.0 * f(b) - 8.0 * f(c) + f(d)) / (12.0 * h)).eval();
}

// Gamma^l_{ik} = 1/2 g^{lm} (d_i g_mk + d_k g_mi - d_m g_ik), flattened as
// a matrix with row l and column i * n + k.
inline Eigen::MatrixXd christoffel_flat(const MetricFn& g, const Eigen::VectorXd& p, double h = 1e-3) {
    const int n = static_cast<int>(p.size());
    const Eigen::MatrixXd ginv = g(p).inverse();
    std::vector<Eigen::MatrixXd> dg(n);
    for (int i = 0; i < n; ++i) dg[i] = d4(g, p, i, h * std::max(1.0, std::abs(p[i])));
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n * n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int m = 0; m < n; ++m) s += ginv(l, m) * (dg[i](m, k) + dg[k](m, i) - dg[m](i, k));
                G(l, i * n + k) = 0.5 * s;
            }
    return G;
}

inline Arr3 christoffel(const MetricFn& g, const Eigen::VectorXd& p, double h = 1e-3) {
    const int n = static_cast<int>(p.size());
    const Eigen::MatrixXd G = christoffel_flat(g, p, h);
    Arr3 out = zeros3(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) out[l][i][k] = G(l, i * n + k);
    return out;
}

// R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^h_{jk} Gamma^l_{ih} - Gamma^h_{ik} Gamma^l_{jh}
inline Arr4 riemann_mixed(const MetricFn& g, const Eigen::VectorXd& p, double h = 2e-3) {
    const int n = static_cast<int>(p.size());
    auto Gf = [&](const Eigen::VectorXd& q) { return christoffel_flat(g, q, 1e-3); };
    const Eigen::MatrixXd G = Gf(p);
    std::vector<Eigen::MatrixXd> dG(n);
    for (int i = 0; i < n; ++i) dG[i] = d4(Gf, p, i, h * std::max(1.0, std::abs(p[i])));
    auto gam = [&](int l, int i, int k) { return G(l, i * n + k); };
    Arr4 R = zeros4(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = dG[i](l, j * n + k) - dG[j](l, i * n + k);
                    for (int hh = 0; hh < n; ++hh)
                        v += gam(hh, j, k) * gam(l, i, hh) - gam(hh, i, k) * gam(l, j, hh);
                    R[l][k][i][j] = v;
                }
    return R;
}

// R_{ijkl} = g_{ih} R^h_{jkl}
inline Arr4 lower(const Eigen::MatrixXd& g, const Arr4& mixed) {
    const int n = static_cast<int>(g.rows());
    Arr4 out = zeros4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int h = 0; h < n; ++h) out[i][j][k][l] += g(i, h) * mixed[h][j][k][l];
    return out;
}

// A_{abcd} B^{abcd}, raising B one index at a time.
inline double contract(const Arr4& a, const Arr4& b, const Eigen::MatrixXd& ginv) {
    const int n = static_cast<int>(ginv.rows());
    Arr4 t = b;
    for (int slot = 0; slot < 4; ++slot) {
        Arr4 u = zeros4(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int m = 0; m < n; ++m) {
                            int idx[4] = {i, j, k, l};
                            const int target = idx[slot];
                            idx[slot] = m;
                            u[i][j][k][l] += ginv(target, m) * t[idx[0]][idx[1]][idx[2]][idx[3]];
                        }
        t = u;
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += a[i][j][k][l] * t[i][j][k][l];
    return s;
}

// Standard Boyer-Lindquist Kerr metric written from the textbook form
// ds^2 = -(1 - 2Mr/S) dt^2 - (4Mar sin^2/S) dt dphi + S/D dr^2 + S dth^2
//        + (r^2 + a^2 + 2Ma^2 r sin^2/S) sin^2 dphi^2.
inline Eigen::MatrixXd kerr_textbook(double M, double a, const Eigen::VectorXd& p) {
    const double r = p[1], c = std::cos(p[2]), s = std::sin(p[2]);
    const double S = r * r + a * a * c * c, D = r * r - 2 * M * r + a * a;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    g(0, 0) = -(1 - 2 * M * r / S);
    g(0, 3) = g(3, 0) = -2 * M * a * r * s * s / S;
    g(1, 1) = S / D;
    g(2, 2) = S;
    g(3, 3) = (r * r + a * a + 2 * M * a * a * r * s * s / S) * s * s;
    return g;
}

inline std::complex<double> kerr_psi2(double M, double a, double r, double theta) {
    return M / std::pow(std::complex<double>(r, -a * std::cos(theta)), 3);
}

}  // namespace oracle
