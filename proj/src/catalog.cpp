#include "rsv/catalog.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/AutoDiff>

#include "rsv/errors.hpp"

namespace rsv {
namespace {

using std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool angle_ok(double theta) { return theta > 0.0 && theta < pi && std::abs(std::sin(theta)) > 1e-8; }

Tensor4 zero_riemann(int n) { return Tensor4(n); }

// Boyer-Lindquist components; T is double or Complex for complex-step derivatives.
template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> kerr_metric(double M, double a, T r, T theta) {
    using std::cos, std::sin;
    const T c = cos(theta), s = sin(theta);
    const T sigma = r * r + a * a * c * c;
    const T delta = r * r - 2.0 * M * r + a * a;
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> g = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(4, 4);
    g(0, 0) = -(1.0 - 2.0 * M * r / sigma);
    g(0, 3) = g(3, 0) = -2.0 * M * a * r * s * s / sigma;
    g(1, 1) = sigma / delta;
    g(2, 2) = sigma;
    g(3, 3) = (r * r + a * a + 2.0 * M * a * a * r * s * s / sigma) * s * s;
    return g;
}

// d g and d d g by nested forward-mode differentiation in (r, theta).
MetricDerivatives kerr_metric_derivatives(double M, double a, double r, double theta) {
    using Inner = Eigen::AutoDiffScalar<Eigen::Vector2d>;
    using Outer = Eigen::AutoDiffScalar<Eigen::Matrix<Inner, 2, 1>>;
    const Outer rr(Inner(r, 2, 0), 2, 0);
    const Outer th(Inner(theta, 2, 1), 2, 1);
    const auto g = kerr_metric<Outer>(M, a, rr, th);
    MetricDerivatives d;
    d.first.assign(4, Eigen::MatrixXd::Zero(4, 4));
    d.second.assign(4, std::vector<Eigen::MatrixXd>(4, Eigen::MatrixXd::Zero(4, 4)));
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v)
            for (int i = 0; i < 2; ++i) {
                const Inner& di = g(u, v).derivatives()[i];
                d.first[i + 1](u, v) = di.value();
                for (int j = 0; j < 2; ++j) d.second[i + 1][j + 1](u, v) = di.derivatives()[j];
            }
    return d;
}

CatalogEntry constant_metric(const std::string& id, const Eigen::MatrixXd& g,
                             std::vector<int> signature, std::vector<std::string> coords) {
    const int n = static_cast<int>(g.rows());
    CatalogEntry e;
    e.spec.id = id;
    e.spec.dimension = n;
    e.spec.signature = std::move(signature);
    e.spec.metric = [g](const Point&) { return g; };
    e.spec.analytic_gamma = [n](const Point&) { return Tensor3(n); };
    e.spec.analytic_riemann = [n](const Point&) { return zero_riemann(n); };
    e.coordinates = std::move(coords);
    e.default_point = Point::Zero(n);
    e.admissible = [](const Point& p) { return p.allFinite(); };
    e.sample = [n](std::mt19937_64& rng) {
        Point p(n);
        for (int i = 0; i < n; ++i) p[i] = uniform(rng, -5.0, 5.0);
        return p;
    };
    e.expected_sigma = [](const Point&) { return std::vector<double>{0.0}; };
    return e;
}

std::vector<std::string> numbered_coords(int n) {
    std::vector<std::string> c;
    for (int i = 0; i < n; ++i) c.push_back("x" + std::to_string(i));
    return c;
}

}  // namespace

CatalogEntry sphere2() {
    CatalogEntry e;
    e.spec.id = "sphere2";
    e.spec.dimension = 2;
    e.spec.signature = {1, 1};
    e.spec.metric = [](const Point& p) {
        const double s = std::sin(p[0]);
        Eigen::MatrixXd g(2, 2);
        g << 1.0, 0.0, 0.0, s * s;
        return g;
    };
    e.spec.analytic_gamma = [](const Point& p) {
        const double s = std::sin(p[0]), c = std::cos(p[0]);
        Tensor3 G(2);
        G(0, 1, 1) = -s * c;
        G(1, 0, 1) = G(1, 1, 0) = c / s;
        return G;
    };
    e.spec.analytic_riemann = [](const Point& p) {
        const double s2 = std::pow(std::sin(p[0]), 2);
        Tensor4 R(2);
        R(0, 1, 0, 1) = s2;
        R(0, 1, 1, 0) = -s2;
        R(1, 0, 1, 0) = 1.0;
        R(1, 0, 0, 1) = -1.0;
        return R;
    };
    e.coordinates = {"theta", "phi"};
    e.default_point = Point(2);
    e.default_point << pi / 3.0, 0.0;
    e.admissible = [](const Point& p) { return p.size() == 2 && angle_ok(p[0]); };
    e.sample = [](std::mt19937_64& rng) {
        Point p(2);
        p << uniform(rng, 0.2, pi - 0.2), uniform(rng, 0.0, 2.0 * pi);
        return p;
    };
    e.expected_sigma = [](const Point&) { return std::vector<double>{0.0, 1.0}; };
    return e;
}

CatalogEntry space_form(double kappa, int n) {
    if (n < 2 || n > 8) throw ConfigError("space-form: n must be in [2, 8]");
    CatalogEntry e;
    e.spec.id = "space-form";
    e.spec.dimension = n;
    e.spec.signature.assign(n, 1);
    e.params = {{"kappa", kappa}, {"n", static_cast<double>(n)}};
    auto conformal = [kappa](const Point& p) { return 1.0 / (1.0 + 0.25 * kappa * p.squaredNorm()); };
    e.spec.metric = [conformal, n](const Point& p) {
        const double phi = conformal(p);
        return Eigen::MatrixXd(phi * phi * Eigen::MatrixXd::Identity(n, n));
    };
    // g = phi^2 delta: Gamma^l_{ik} = delta_li d_k ln phi + delta_lk d_i ln phi - delta_ik d_l ln phi
    e.spec.analytic_gamma = [conformal, kappa, n](const Point& p) {
        const double phi = conformal(p);
        Eigen::VectorXd dlog = -0.5 * kappa * phi * p;
        Tensor3 G(n);
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    G(l, i, k) = (l == i ? dlog[k] : 0.0) + (l == k ? dlog[i] : 0.0) -
                                 (i == k ? dlog[l] : 0.0);
        return G;
    };
    // R^l_{kij} = kappa (delta^l_i g_kj - delta^l_j g_ki)
    e.spec.analytic_riemann = [conformal, kappa, n](const Point& p) {
        const double phi = conformal(p);
        const double gd = phi * phi;
        Tensor4 R(n);
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        R(l, k, i, j) = kappa * ((l == i && k == j ? gd : 0.0) -
                                                 (l == j && k == i ? gd : 0.0));
        return R;
    };
    e.coordinates = numbered_coords(n);
    e.default_point = Point::Zero(n);
    const double radius = kappa < 0.0 ? 2.0 / std::sqrt(-kappa) : 1e300;
    e.admissible = [radius](const Point& p) { return p.allFinite() && p.norm() < radius; };
    e.sample = [radius, n](std::mt19937_64& rng) {
        const double box = std::min(1.0, 0.4 * radius / std::sqrt(static_cast<double>(n)));
        Point p(n);
        for (int i = 0; i < n; ++i) p[i] = uniform(rng, -box, box);
        return p;
    };
    e.expected_sigma = [kappa](const Point&) {
        return kappa == 0.0 ? std::vector<double>{0.0} : std::vector<double>{0.0, std::abs(kappa)};
    };
    return e;
}

SchwarzschildCoefficients schwarzschild_coefficients(double M, double r, double theta) {
    const double f = 1.0 - 2.0 * M / r;
    const double r3 = r * r * r;
    return {M * f / r3, M / (r3 * f), M / r, M * std::pow(std::sin(theta), 2) / r};
}

CatalogEntry schwarzschild(double M) {
    if (!(M > 0.0)) throw ConfigError("schwarzschild: M must be positive");
    CatalogEntry e;
    e.spec.id = "schwarzschild";
    e.spec.dimension = 4;
    e.spec.signature = {-1, 1, 1, 1};
    e.params = {{"M", M}};
    e.spec.metric = [M](const Point& p) {
        const double r = p[1], f = 1.0 - 2.0 * M / r;
        const double s = std::sin(p[2]);
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
        g(0, 0) = -f;
        g(1, 1) = 1.0 / f;
        g(2, 2) = r * r;
        g(3, 3) = r * r * s * s;
        return g;
    };
    e.spec.analytic_gamma = [M](const Point& p) {
        const double r = p[1], f = 1.0 - 2.0 * M / r, fp = 2.0 * M / (r * r);
        const double s = std::sin(p[2]), c = std::cos(p[2]);
        Tensor3 G(4);
        G(0, 0, 1) = G(0, 1, 0) = fp / (2.0 * f);
        G(1, 0, 0) = f * fp / 2.0;
        G(1, 1, 1) = -fp / (2.0 * f);
        G(1, 2, 2) = -r * f;
        G(1, 3, 3) = -r * f * s * s;
        G(2, 1, 2) = G(2, 2, 1) = 1.0 / r;
        G(2, 3, 3) = -s * c;
        G(3, 1, 3) = G(3, 3, 1) = 1.0 / r;
        G(3, 2, 3) = G(3, 3, 2) = c / s;
        return G;
    };
    e.spec.analytic_riemann = [M](const Point& p) {
        const auto [A, B, C, D] = schwarzschild_coefficients(M, p[1], p[2]);
        Tensor4 R(4);
        auto pair = [&R](int a, int b, int c, int d, double v) {
            R(a, b, c, d) = v;
            R(a, b, d, c) = -v;
        };
        pair(0, 1, 0, 1, 2 * B);
        pair(0, 2, 2, 0, C);
        pair(0, 3, 3, 0, D);
        pair(1, 0, 0, 1, 2 * A);
        pair(1, 2, 2, 1, C);
        pair(1, 3, 3, 1, D);
        pair(2, 0, 2, 0, A);
        pair(2, 1, 1, 2, B);
        pair(2, 3, 2, 3, 2 * D);
        pair(3, 0, 3, 0, A);
        pair(3, 1, 1, 3, B);
        pair(3, 2, 3, 2, 2 * C);
        return R;
    };
    e.coordinates = {"t", "r", "theta", "phi"};
    e.default_point = Point(4);
    e.default_point << 0.0, 3.0 * M, pi / 4.0, 0.0;
    e.admissible = [M](const Point& p) {
        return p.size() == 4 && p.allFinite() && p[1] > 2.0 * M && angle_ok(p[2]);
    };
    e.sample = [M](std::mt19937_64& rng) {
        Point p(4);
        p << uniform(rng, -10.0, 10.0), uniform(rng, 2.5 * M, 12.0 * M),
            uniform(rng, 0.2, pi - 0.2), uniform(rng, 0.0, 2.0 * pi);
        return p;
    };
    e.expected_sigma = [M](const Point& p) {
        return std::vector<double>{0.0, M / std::pow(p[1], 3)};
    };
    return e;
}

NPTetrad kerr_tetrad(double M, double a, double r, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double delta = r * r - 2.0 * M * r + a * a;
    const double sigma = r * r + a * a * c * c;
    NPTetrad t;
    t.l = Eigen::Vector4d((r * r + a * a) / delta, 1.0, 0.0, a / delta);
    t.n = Eigen::Vector4d(r * r + a * a, -delta, 0.0, a) / (2.0 * sigma);
    const Complex I(0.0, 1.0);
    const Complex pref = 1.0 / (std::sqrt(2.0) * (r + I * a * c));
    t.m = Eigen::Vector4cd(I * a * s, 0.0, 1.0, I / s) * pref;
    t.ln_product = -1.0;
    return t;
}

Complex kerr_psi2(double M, double a, double r, double theta) {
    const Complex d(r, -a * std::cos(theta));
    return M / (d * d * d);
}

CatalogEntry kerr(double M, double a) {
    if (!(M > 0.0)) throw ConfigError("kerr: M must be positive");
    if (!(a >= 0.0 && a < M)) throw ConfigError("kerr: need 0 <= a < M");
    CatalogEntry e;
    e.spec.id = "kerr";
    e.spec.dimension = 4;
    e.spec.signature = {-1, 1, 1, 1};
    e.params = {{"M", M}, {"a", a}};
    e.spec.metric = [M, a](const Point& p) { return kerr_metric<double>(M, a, p[1], p[2]); };
    e.spec.metric_derivatives = [M, a](const Point& p) { return kerr_metric_derivatives(M, a, p[1], p[2]); };
    e.coordinates = {"t", "r", "theta", "phi"};
    e.default_point = Point(4);
    e.default_point << 0.0, 3.0 * M, pi / 3.0, 0.0;
    const double r_plus = M + std::sqrt(M * M - a * a);
    e.admissible = [r_plus](const Point& p) {
        return p.size() == 4 && p.allFinite() && p[1] > r_plus && angle_ok(p[2]);
    };
    e.sample = [M](std::mt19937_64& rng) {
        Point p(4);
        p << uniform(rng, -10.0, 10.0), uniform(rng, 2.5 * M, 10.0 * M),
            uniform(rng, 0.2, pi - 0.2), uniform(rng, 0.0, 2.0 * pi);
        return p;
    };
    e.tetrad = [M, a](const Point& p) { return kerr_tetrad(M, a, p[1], p[2]); };
    e.expected_sigma = [M, a](const Point& p) {
        const Complex psi2 = kerr_psi2(M, a, p[1], p[2]);
        const Complex I = 3.0 * psi2 * psi2;
        return std::vector<double>{0.0, std::sqrt((std::abs(I) + I.real()) / 6.0)};
    };
    return e;
}

CatalogEntry euclidean(int n) {
    if (n < 2 || n > 8) throw ConfigError("euclidean: n must be in [2, 8]");
    CatalogEntry e = constant_metric("euclidean", Eigen::MatrixXd::Identity(n, n),
                                     std::vector<int>(n, 1), numbered_coords(n));
    e.params = {{"n", static_cast<double>(n)}};
    return e;
}

CatalogEntry minkowski() {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    g(0, 0) = -1.0;
    return constant_metric("minkowski", g, {-1, 1, 1, 1}, {"t", "x", "y", "z"});
}

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {"sphere2", "space-form", "euclidean",
                                                 "minkowski", "schwarzschild", "kerr"};
    return ids;
}

std::string catalog_description(const std::string& id) {
    if (id == "sphere2") return "unit 2-sphere, coordinates (theta, phi)";
    if (id == "space-form") return "constant sectional curvature; params kappa, n";
    if (id == "euclidean") return "flat R^n; param n";
    if (id == "minkowski") return "flat spacetime, signature (-,+,+,+)";
    if (id == "schwarzschild") return "Schwarzschild exterior, (t, r, theta, phi); param M";
    if (id == "kerr") return "Kerr in Boyer-Lindquist (t, r, theta, phi); params M, a";
    throw ConfigError("unknown catalog id '" + id + "'");
}

namespace {

double param(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int int_param(const Params& p, const std::string& key, int fallback) {
    const double v = param(p, key, fallback);
    if (v != std::round(v)) throw ConfigError("parameter " + key + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

CatalogEntry make_catalog_entry(const std::string& id, const Params& params) {
    if (id == "sphere2") return sphere2();
    if (id == "space-form")
        return space_form(param(params, "kappa", 1.0), int_param(params, "n", 3));
    if (id == "euclidean") return euclidean(int_param(params, "n", 4));
    if (id == "minkowski") return minkowski();
    if (id == "schwarzschild") return schwarzschild(param(params, "M", 1.0));
    if (id == "kerr") return kerr(param(params, "M", 1.0), param(params, "a", 0.5));
    throw ConfigError("unknown catalog id '" + id + "'");
}

}  // namespace rsv
