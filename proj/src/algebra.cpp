#include "rsv/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "rsv/errors.hpp"

namespace rsv {
namespace {

constexpr double kTetradTol = 1e-8;

// Raise every index of a lowered rank-4 tensor, one index at a time.
Tensor4 raise_all(const Tensor4& a, const Eigen::MatrixXd& gi) {
    const int n = a.dim();
    Tensor4 cur = a;
    for (int slot = 0; slot < 4; ++slot) {
        Tensor4 next(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const int idx[4] = {i, j, k, l};
                        double s = 0.0;
                        for (int h = 0; h < n; ++h) {
                            int src[4] = {i, j, k, l};
                            src[slot] = h;
                            s += gi(idx[slot], h) * cur(src[0], src[1], src[2], src[3]);
                        }
                        next(i, j, k, l) = s;
                    }
        cur = std::move(next);
    }
    return cur;
}

template <class A, class B, class C, class D>
Complex contract(const Tensor4& t, const A& a, const B& b, const C& c, const D& d) {
    const int n = t.dim();
    Complex s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    s += t(i, j, k, l) * Complex(a[i]) * Complex(b[j]) * Complex(c[k]) *
                         Complex(d[l]);
    return s;
}

}  // namespace

double inner(const Eigen::MatrixXd& g, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != g.rows() || v.size() != g.rows())
        throw InvalidInput("inner: vector length does not match metric dimension");
    return u.dot(g * v);
}

Eigen::MatrixXd ricci(const CurvatureData& cd) {
    const int n = cd.dim();
    const Tensor4& r = cd.riemann_lowered;
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int h = 0; h < n; ++h)
                for (int j = 0; j < n; ++j) s += cd.g_inv(h, j) * r(h, i, j, k);
            ric(i, k) = s;
        }
    return ric;
}

double ricci_scalar(const CurvatureData& cd) {
    return (cd.g_inv.transpose() * ricci(cd)).trace();
}

double full_contraction(const Tensor4& a, const Tensor4& b, const Eigen::MatrixXd& g_inv) {
    const Tensor4 up = raise_all(b, g_inv);
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * up.data()[i];
    return s;
}

double kretschmann(const CurvatureData& cd) {
    return full_contraction(cd.riemann_lowered, cd.riemann_lowered, cd.g_inv);
}

Tensor4 weyl_trace_part(const CurvatureData& cd) {
    const int n = cd.dim();
    if (n < 3) throw DimensionTooSmall("Weyl tensor needs dimension >= 3");
    const Eigen::MatrixXd ric = ricci(cd);
    const double rs = (cd.g_inv.transpose() * ric).trace();
    const Eigen::MatrixXd& g = cd.g;
    const double c1 = 1.0 / (n - 2);
    const double c2 = rs / ((n - 1.0) * (n - 2.0));
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t(i, j, k, l) = -c1 * (ric(i, l) * g(j, k) - ric(i, k) * g(j, l) +
                                           g(i, l) * ric(j, k) - g(i, k) * ric(j, l)) +
                                    c2 * (g(i, l) * g(j, k) - g(i, k) * g(j, l));
    return t;
}

Tensor4 weyl(const CurvatureData& cd) {
    Tensor4 c = cd.riemann_lowered;
    const Tensor4 t = weyl_trace_part(cd);
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= t.data()[i];
    return c;
}

double tetrad_defect(const Eigen::MatrixXd& g, const NPTetrad& t) {
    const Eigen::VectorXcd l = t.l.cast<Complex>();
    const Eigen::VectorXcd n = t.n.cast<Complex>();
    const Eigen::VectorXcd& m = t.m;
    const Eigen::VectorXcd mb = t.m.conjugate();
    const Eigen::MatrixXcd gc = g.cast<Complex>();
    auto ip = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
        return Complex((a.transpose() * gc * b)(0, 0));
    };
    double d = 0.0;
    auto want = [&](Complex got, Complex expected) { d = std::max(d, std::abs(got - expected)); };
    want(ip(l, l), 0.0);
    want(ip(n, n), 0.0);
    want(ip(m, m), 0.0);
    want(ip(l, m), 0.0);
    want(ip(n, m), 0.0);
    want(ip(l, n), t.ln_product);
    want(ip(m, mb), 1.0);
    return d;
}

NPScalars np_scalars(const CurvatureData& cd, const NPTetrad& t) {
    if (cd.dim() != 4) throw DimensionTooSmall("Newman-Penrose scalars need dimension 4");
    const double defect = tetrad_defect(cd.g, t);
    if (!(defect <= kTetradTol))
        throw BadTetrad("tetrad normalization defect " + std::to_string(defect));
    const Tensor4 c = weyl(cd);
    const Eigen::VectorXcd l = t.l.cast<Complex>();
    const Eigen::VectorXcd n = t.n.cast<Complex>();
    const Eigen::VectorXcd& m = t.m;
    const Eigen::VectorXcd mb = t.m.conjugate();
    // With signature -+++ and R_{1212} > 0 on spheres, C(l, m, mb, n) = -M/r^3 on
    // Schwarzschild; the overall minus restores the usual positive Psi_2.
    return {-contract(c, l, m, l, m), -contract(c, l, n, l, m), -contract(c, l, m, mb, n),
            -contract(c, l, n, mb, n), -contract(c, n, mb, n, mb)};
}

Complex invariant_I(const NPScalars& p) {
    return p[0] * p[4] - 4.0 * p[1] * p[3] + 3.0 * p[2] * p[2];
}

InvariantReport invariants(const CurvatureData& cd, const std::optional<NPTetrad>& tetrad) {
    InvariantReport rep;
    rep.ricci_scalar = ricci_scalar(cd);
    rep.kretschmann = kretschmann(cd);
    if (cd.dim() >= 3) {
        const Tensor4 c = weyl(cd);
        const double cc = full_contraction(c, c, cd.g_inv);
        rep.weyl_contraction = cc;
        if (cc >= 0.0) rep.weyl_norm = std::sqrt(cc);
    }
    if (tetrad) {
        rep.np = np_scalars(cd, *tetrad);
        rep.invariant_I = invariant_I(*rep.np);
    }
    return rep;
}

}  // namespace rsv
