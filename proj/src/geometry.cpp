#include "rsv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsv/errors.hpp"

namespace rsv {
namespace {

constexpr double kSingularDetTol = 1e-14;
constexpr double kDiagnosticSymmetryTol = 1e-6;

void check_point(const MetricSpec& spec, const Point& p) {
    if (spec.dimension < 2 || spec.dimension > 8)
        throw InvalidInput("metric '" + spec.id + "': dimension must be in [2, 8]");
    if (p.size() != spec.dimension) {
        std::ostringstream os;
        os << "point has " << p.size() << " coordinates, metric '" << spec.id << "' needs "
           << spec.dimension;
        throw InvalidInput(os.str());
    }
    if (!p.allFinite()) throw InvalidInput("point has non-finite coordinates");
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
    return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int n) {
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

Eigen::VectorXd flatten(const Tensor3& t) {
    return Eigen::Map<const Eigen::VectorXd>(t.data().data(),
                                             static_cast<Eigen::Index>(t.data().size()));
}

std::vector<Eigen::MatrixXd> metric_first_derivatives(const MetricSpec& spec, const Point& p,
                                                      const FdOptions& fd, bool exact_ok) {
    const int n = spec.dimension;
    if (exact_ok && spec.metric_derivatives) return spec.metric_derivatives(p).first;
    VectorField gflat = [&](const Eigen::VectorXd& q) { return flatten(spec.metric(q)); };
    std::vector<Eigen::MatrixXd> dg(n);
    for (int i = 0; i < n; ++i) dg[i] = unflatten(first_derivative(gflat, p, i, fd).value, n);
    return dg;
}

// R^l_{kij} from Gamma and dgamma[i](l, j, k) = d_i Gamma^l_{jk}.
Tensor4 assemble_riemann(const Tensor3& gamma, const std::vector<Tensor3>& dgamma) {
    const int n = gamma.dim();
    Tensor4 r(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int h = 0; h < n; ++h)
                        v += gamma(h, j, k) * gamma(l, i, h) - gamma(h, i, k) * gamma(l, j, h);
                    r(l, k, i, j) = v;
                }
    return r;
}

}  // namespace

Tensor3 gamma_from_derivatives(const Eigen::MatrixXd& g_inv,
                               const std::vector<Eigen::MatrixXd>& dg) {
    const int n = static_cast<int>(g_inv.rows());
    Tensor3 first(n);  // Gamma_{mik}
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                first(m, i, k) = 0.5 * (dg[i](m, k) + dg[k](m, i) - dg[m](i, k));
    Tensor3 gamma(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int m = 0; m < n; ++m) s += g_inv(l, m) * first(m, i, k);
                gamma(l, i, k) = s;
            }
    return gamma;
}

int MetricSpec::negative_count() const {
    return static_cast<int>(std::count(signature.begin(), signature.end(), -1));
}

double SymmetryReport::max_symmetry_defect() const {
    return std::max({metric_asymmetry, first_pair, second_pair, pair_exchange});
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> metric_at(const MetricSpec& spec, const Point& p) {
    check_point(spec, p);
    const int n = spec.dimension;
    Eigen::MatrixXd g = spec.metric(p);
    if (g.rows() != n || g.cols() != n)
        throw InvalidInput("metric '" + spec.id + "' returned a matrix of the wrong size");
    if (!g.allFinite()) throw SingularMetric("metric '" + spec.id + "' is not finite at the point");
    const double scale = g.cwiseAbs().maxCoeff();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    const double det = lu.determinant();
    if (scale == 0.0 || std::abs(det) < kSingularDetTol * std::pow(scale, n))
        throw SingularMetric("metric '" + spec.id + "' is degenerate at the point");

    if (static_cast<int>(spec.signature.size()) == n) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (g + g.transpose()),
                                                           Eigen::EigenvaluesOnly);
        const int negatives = static_cast<int>((eig.eigenvalues().array() < 0.0).count());
        if (negatives != spec.negative_count()) {
            std::ostringstream os;
            os << "metric '" << spec.id << "' has " << negatives
               << " negative eigenvalues at the point, signature expects "
               << spec.negative_count();
            throw SignatureMismatch(os.str());
        }
    }
    return {g, lu.inverse()};
}

Tensor3 christoffel(const MetricSpec& spec, const Point& p, DerivativePath path,
                    const FdOptions& fd) {
    const auto [g, g_inv] = metric_at(spec, p);
    if (path == DerivativePath::Auto && spec.analytic_gamma) return spec.analytic_gamma(p);
    return gamma_from_derivatives(g_inv, metric_first_derivatives(spec, p, fd, path == DerivativePath::Auto));
}

Tensor4 lower_first_index(const Eigen::MatrixXd& g, const Tensor4& mixed) {
    const int n = mixed.dim();
    Tensor4 low(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int h = 0; h < n; ++h) s += g(i, h) * mixed(h, j, k, l);
                    low(i, j, k, l) = s;
                }
    return low;
}

CurvatureData riemann(const MetricSpec& spec, const Point& p, DerivativePath path,
                      const FdOptions& fd) {
    const int n = spec.dimension;
    CurvatureData cd;
    cd.point = p;
    std::tie(cd.g, cd.g_inv) = metric_at(spec, p);

    const bool use_analytic = path == DerivativePath::Auto;
    if (use_analytic && spec.analytic_riemann) {
        cd.source = CurvatureSource::Analytic;
        cd.riemann_mixed = spec.analytic_riemann(p);
        cd.gamma = spec.analytic_gamma
                       ? spec.analytic_gamma(p)
                       : gamma_from_derivatives(cd.g_inv, metric_first_derivatives(spec, p, fd, true));
    } else {
        cd.source = CurvatureSource::Numeric;
        std::vector<Tensor3> dgamma(n);
        if (use_analytic && spec.analytic_gamma) {
            cd.gamma = spec.analytic_gamma(p);
            VectorField gflat = [&](const Eigen::VectorXd& q) {
                return flatten(spec.analytic_gamma(q));
            };
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd d = first_derivative(gflat, p, i, fd).value;
                dgamma[i] = Tensor3(n);
                std::copy(d.data(), d.data() + d.size(), dgamma[i].data().begin());
            }
        } else {
            // d_i Gamma^l_{jk} = (d_i g^{lm}) Gamma_{mjk} + g^{lm} d_i Gamma_{mjk}
            std::vector<Eigen::MatrixXd> dg(n);
            std::vector<std::vector<Eigen::MatrixXd>> ddg(n, std::vector<Eigen::MatrixXd>(n));
            if (use_analytic && spec.metric_derivatives) {
                MetricDerivatives d = spec.metric_derivatives(p);
                dg = std::move(d.first);
                ddg = std::move(d.second);
            } else {
                VectorField gflat = [&](const Eigen::VectorXd& q) { return flatten(spec.metric(q)); };
                for (int i = 0; i < n; ++i)
                    dg[i] = unflatten(first_derivative(gflat, p, i, fd).value, n);
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        ddg[i][j] = unflatten(second_derivative(gflat, p, i, j, fd).value, n);
                        ddg[j][i] = ddg[i][j];
                    }
            }
            cd.gamma = gamma_from_derivatives(cd.g_inv, dg);
            Tensor3 first(n);
            for (int m = 0; m < n; ++m)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        first(m, j, k) = 0.5 * (dg[j](m, k) + dg[k](m, j) - dg[m](j, k));
            for (int i = 0; i < n; ++i) {
                const Eigen::MatrixXd dginv = -cd.g_inv * dg[i] * cd.g_inv;
                dgamma[i] = Tensor3(n);
                for (int l = 0; l < n; ++l)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) {
                            double s = 0.0;
                            for (int m = 0; m < n; ++m) {
                                const double dfirst =
                                    0.5 * (ddg[i][j](m, k) + ddg[i][k](m, j) - ddg[i][m](j, k));
                                s += dginv(l, m) * first(m, j, k) + cd.g_inv(l, m) * dfirst;
                            }
                            dgamma[i](l, j, k) = s;
                        }
            }
        }
        cd.riemann_mixed = assemble_riemann(cd.gamma, dgamma);
    }
    cd.riemann_lowered = lower_first_index(cd.g, cd.riemann_mixed);
    cd.symmetry = verify_tensor_symmetries(cd, kDiagnosticSymmetryTol);
    cd.symmetry_violation = !cd.symmetry.pass();
    return cd;
}

SymmetryReport verify_tensor_symmetries(const Tensor4& r, double tol) {
    const int n = r.dim();
    SymmetryReport rep;
    rep.tol = tol;
    rep.scale = std::max(1.0, r.max_abs());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = r(i, j, k, l);
                    rep.first_pair = std::max(rep.first_pair, std::abs(v + r(j, i, k, l)));
                    rep.second_pair = std::max(rep.second_pair, std::abs(v + r(i, j, l, k)));
                    rep.pair_exchange = std::max(rep.pair_exchange, std::abs(v - r(k, l, i, j)));
                    rep.bianchi =
                        std::max(rep.bianchi, std::abs(v + r(i, l, j, k) + r(i, k, l, j)));
                }
    return rep;
}

SymmetryReport verify_tensor_symmetries(const CurvatureData& cd, double tol) {
    SymmetryReport rep = verify_tensor_symmetries(cd.riemann_lowered, tol);
    rep.metric_asymmetry = (cd.g - cd.g.transpose()).cwiseAbs().maxCoeff();
    return rep;
}

namespace {

std::vector<std::pair<int, int>> bivectors(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return out;
}

// True when the pair (A, B) is R(ik, jl) for some i < j < k < l.
bool is_dependent(std::pair<int, int> a, std::pair<int, int> b) {
    const auto [i, k] = a;
    const auto [j, l] = b;
    return i < j && j < k && k < l;
}

void set_with_symmetries(Tensor4& r, int i, int j, int k, int l, double v) {
    r(i, j, k, l) = v;
    r(j, i, k, l) = -v;
    r(i, j, l, k) = -v;
    r(j, i, l, k) = v;
    r(k, l, i, j) = v;
    r(l, k, i, j) = -v;
    r(k, l, j, i) = -v;
    r(l, k, j, i) = v;
}

}  // namespace

int independent_component_count(int n) {
    const int pairs = n * (n - 1) / 2;
    const int quads = n < 4 ? 0 : n * (n - 1) * (n - 2) * (n - 3) / 24;
    return pairs * (pairs + 1) / 2 - quads;
}

std::vector<double> independent_components(const Tensor4& r) {
    const auto bv = bivectors(r.dim());
    std::vector<double> out;
    for (std::size_t a = 0; a < bv.size(); ++a)
        for (std::size_t b = a; b < bv.size(); ++b) {
            if (is_dependent(bv[a], bv[b])) continue;
            out.push_back(r(bv[a].first, bv[a].second, bv[b].first, bv[b].second));
        }
    return out;
}

Tensor4 reconstruct_from_independent(int n, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != independent_component_count(n))
        throw InvalidInput("wrong number of independent curvature components");
    const auto bv = bivectors(n);
    Tensor4 r(n);
    std::size_t next = 0;
    for (std::size_t a = 0; a < bv.size(); ++a)
        for (std::size_t b = a; b < bv.size(); ++b) {
            if (is_dependent(bv[a], bv[b])) continue;
            set_with_symmetries(r, bv[a].first, bv[a].second, bv[b].first, bv[b].second,
                                values[next++]);
        }
    // Cyclic identity: R(ik, jl) = R(ij, kl) + R(il, jk) for i < j < k < l.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l)
                    set_with_symmetries(r, i, k, j, l, r(i, j, k, l) + r(i, l, j, k));
    return r;
}

}  // namespace rsv
