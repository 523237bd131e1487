#include "rsv/svp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "rsv/algebra.hpp"
#include "rsv/errors.hpp"
#include "rsv/newton.hpp"

namespace rsv {
namespace {

constexpr double kZeroSigma = 1e-8;
constexpr double kOrbitMatchTol = 1e-5;

// T(a, b, c)^i = R^i_{jkl} a^j b^k c^l, i.e. R(B, C) A.
Eigen::VectorXd apply(const Tensor4& R, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& c) {
    const int n = R.dim();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (a[j] == 0.0) continue;
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += R(i, j, k, l) * b[k] * c[l];
            out[i] += a[j] * s;
        }
    return out;
}

// Partial derivatives of T(a, b, c) with respect to a, b and c.
Eigen::MatrixXd d_first(const Tensor4& R, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    const int n = R.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) m(i, j) += R(i, j, k, l) * b[k] * c[l];
    return m;
}

Eigen::MatrixXd d_second(const Tensor4& R, const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
    const int n = R.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) m(i, k) += R(i, j, k, l) * a[j] * c[l];
    return m;
}

Eigen::MatrixXd d_third(const Tensor4& R, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int n = R.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) m(i, l) += R(i, j, k, l) * a[j] * b[k];
    return m;
}

Quadruple unpack(const Eigen::VectorXd& u, int n, const SignPattern& signs) {
    Quadruple q;
    q.w = u.segment(0, n);
    q.x = u.segment(n, n);
    q.y = u.segment(2 * n, n);
    q.z = u.segment(3 * n, n);
    q.signs = signs;
    return q;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

bool parallel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double scale = std::max(1.0, a.lpNorm<Eigen::Infinity>());
    return std::min((a - b).lpNorm<Eigen::Infinity>(), (a + b).lpNorm<Eigen::Infinity>()) <
           1e-6 * scale;
}

bool is_trivial(const Quadruple& q, double sigma) {
    return std::abs(sigma) < kZeroSigma && (parallel(q.w, q.x) || parallel(q.y, q.z));
}

Eigen::VectorXd canonical_sign(const Eigen::VectorXd& v) {
    const double cut = 1e-8 * std::max(1.0, v.lpNorm<Eigen::Infinity>());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > cut) return v[i] < 0.0 ? Eigen::VectorXd(-v) : v;
    return v;
}

// Pair exchanges generated by (W,X) <-> (X,W), (Y,Z) <-> (Z,Y), (W,X) <-> (Y,Z),
// with the sigma sign they induce.
struct Exchange {
    std::array<int, 4> perm;  // new slot k takes old vector perm[k]
    int sigma_sign;
    const char* label;
};

constexpr std::array<Exchange, 8> kExchanges{{
    {{0, 1, 2, 3}, 1, "(W,X,Y,Z)"},
    {{1, 0, 2, 3}, -1, "(X,W,Y,Z)"},
    {{0, 1, 3, 2}, -1, "(W,X,Z,Y)"},
    {{1, 0, 3, 2}, 1, "(X,W,Z,Y)"},
    {{2, 3, 0, 1}, 1, "(Y,Z,W,X)"},
    {{3, 2, 0, 1}, -1, "(Z,Y,W,X)"},
    {{2, 3, 1, 0}, -1, "(Y,Z,X,W)"},
    {{3, 2, 1, 0}, 1, "(Z,Y,X,W)"},
}};

std::array<Eigen::VectorXd, 4> slots(const Quadruple& q) { return {q.w, q.x, q.y, q.z}; }

Quadruple from_slots(const std::array<Eigen::VectorXd, 4>& v, const SignPattern& s) {
    Quadruple q;
    q.w = v[0];
    q.x = v[1];
    q.y = v[2];
    q.z = v[3];
    q.signs = s;
    return q;
}

bool same_orbit(const Quadruple& a, const Quadruple& b) {
    const auto sa = slots(a);
    const auto sb = slots(b);
    std::array<Eigen::VectorXd, 4> cb;
    for (int k = 0; k < 4; ++k) cb[k] = canonical_sign(sb[k]);
    for (const auto& ex : kExchanges) {
        double d = 0.0;
        for (int k = 0; k < 4 && d <= kOrbitMatchTol; ++k)
            d = std::max(d, (canonical_sign(sa[ex.perm[k]]) - cb[k]).lpNorm<Eigen::Infinity>());
        if (d <= kOrbitMatchTol) return true;
    }
    return false;
}

std::vector<SignPattern> all_patterns() {
    std::vector<SignPattern> out;
    for (int mask = 0; mask < 16; ++mask) {
        SignPattern s;
        for (int k = 0; k < 4; ++k) s[k] = (mask >> (3 - k)) & 1 ? -1 : 1;
        out.push_back(s);
    }
    return out;
}

int thread_count(const SolverConfig& cfg) {
    int t = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, 8);
}

// Runs `work(i)` for i in [0, count) on a few threads; results are written by
// index so the merge order does not depend on scheduling.
template <class Work>
void parallel_for(int count, int threads, const Work& work) {
    if (threads <= 1 || count < 2) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) work(i);
        });
    for (auto& th : pool) th.join();
}

std::vector<SVPCluster> cluster_solutions(std::vector<SVPSolution> sols, const SignPattern& signs,
                                          double eps) {
    std::sort(sols.begin(), sols.end(), [](const SVPSolution& a, const SVPSolution& b) {
        return a.sigma != b.sigma ? a.sigma < b.sigma : a.seed < b.seed;
    });
    std::vector<std::vector<const SVPSolution*>> groups;
    double last = 0.0;
    for (const auto& s : sols) {
        if (groups.empty() || std::abs(s.sigma - last) >= eps) groups.emplace_back();
        groups.back().push_back(&s);
        last = s.sigma;
    }
    std::vector<SVPCluster> out;
    for (const auto& grp : groups) {
        SVPCluster c;
        c.signs = signs;
        c.members = static_cast<int>(grp.size());
        const SVPSolution* rep = nullptr;
        std::vector<const Quadruple*> orbit_reps;
        for (const SVPSolution* s : grp) {
            c.trivial = c.trivial || s->trivial;
            const bool better = !rep || (s->trivial && !rep->trivial) ||
                                (s->trivial == rep->trivial && s->seed < rep->seed);
            if (better) rep = s;
            const bool seen = std::any_of(orbit_reps.begin(), orbit_reps.end(),
                                          [&](const Quadruple* q) { return same_orbit(*q, s->q); });
            if (!seen) orbit_reps.push_back(&s->q);
        }
        c.representative = *rep;
        c.sigma = rep->sigma;
        c.distinct_orbits = static_cast<int>(orbit_reps.size());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::string to_string(const SignPattern& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : '-';
    return out;
}

SignPattern parse_sign_pattern(const std::string& text) {
    SignPattern s{};
    int k = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        int v = 0;
        if (text[i] == '+') {
            v = 1;
        } else if (text[i] == '-') {
            v = -1;
        } else if (text.compare(i, 3, "\xE2\x88\x92") == 0) {  // U+2212
            v = -1;
            i += 2;
        } else {
            throw ConfigError("sign pattern '" + text + "' must use only '+' and '-'");
        }
        if (k >= 4) throw ConfigError("sign pattern '" + text + "' must have four signs");
        s[k++] = v;
    }
    if (k != 4) throw ConfigError("sign pattern '" + text + "' must have four signs");
    return s;
}

Eigen::VectorXd Quadruple::stacked() const {
    const int n = dim();
    Eigen::VectorXd u(4 * n);
    u << w, x, y, z;
    return u;
}

std::string to_string(SolutionOrigin o) {
    switch (o) {
        case SolutionOrigin::Multistart: return "multistart";
        case SolutionOrigin::Analytic: return "analytic";
        case SolutionOrigin::ReducedSchwarzschild: return "reduced-schwarzschild";
        case SolutionOrigin::ReducedKerr: return "reduced-kerr";
        case SolutionOrigin::Orbit: return "orbit";
        case SolutionOrigin::MEigen: return "m-eigen";
    }
    return "unknown";
}

double curvature_form(const CurvatureData& cd, const Eigen::VectorXd& w, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    return w.dot(cd.g * apply(cd.riemann_mixed, x, y, z));
}

Eigen::VectorXd residual(const CurvatureData& cd, const Quadruple& q, double sigma) {
    const int n = cd.dim();
    if (q.dim() != n || q.x.size() != n || q.y.size() != n || q.z.size() != n)
        throw InvalidInput("quadruple dimension does not match curvature data");
    const Tensor4& R = cd.riemann_mixed;
    Eigen::VectorXd r(4 * n + 4);
    r.segment(0, n) = apply(R, q.x, q.y, q.z) - sigma * q.w;
    r.segment(n, n) = apply(R, q.w, q.z, q.y) - sigma * q.x;
    r.segment(2 * n, n) = apply(R, q.z, q.w, q.x) - sigma * q.y;
    r.segment(3 * n, n) = apply(R, q.y, q.x, q.w) - sigma * q.z;
    r[4 * n + 0] = inner(cd.g, q.w, q.w) - q.signs[0];
    r[4 * n + 1] = inner(cd.g, q.x, q.x) - q.signs[1];
    r[4 * n + 2] = inner(cd.g, q.y, q.y) - q.signs[2];
    r[4 * n + 3] = inner(cd.g, q.z, q.z) - q.signs[3];
    return r;
}

double residual_norm(const CurvatureData& cd, const Quadruple& q, double sigma) {
    return residual(cd, q, sigma).lpNorm<Eigen::Infinity>();
}

Eigen::MatrixXd residual_jacobian(const CurvatureData& cd, const Quadruple& q, double sigma) {
    const int n = cd.dim();
    const Tensor4& R = cd.riemann_mixed;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4 * n + 4, 4 * n + 1);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const auto& w = q.w;
    const auto& x = q.x;
    const auto& y = q.y;
    const auto& z = q.z;
    enum { W = 0, X = 1, Y = 2, Z = 3 };
    auto block = [&](int eq, int var) { return J.block(eq * n, var * n, n, n); };
    // R(Y,Z)X = T(x, y, z)
    block(0, X) += d_first(R, y, z);
    block(0, Y) += d_second(R, x, z);
    block(0, Z) += d_third(R, x, y);
    block(0, W) -= sigma * I;
    // R(Z,Y)W = T(w, z, y)
    block(1, W) += d_first(R, z, y);
    block(1, Z) += d_second(R, w, y);
    block(1, Y) += d_third(R, w, z);
    block(1, X) -= sigma * I;
    // R(W,X)Z = T(z, w, x)
    block(2, Z) += d_first(R, w, x);
    block(2, W) += d_second(R, z, x);
    block(2, X) += d_third(R, z, w);
    block(2, Y) -= sigma * I;
    // R(X,W)Y = T(y, x, w)
    block(3, Y) += d_first(R, x, w);
    block(3, X) += d_second(R, y, w);
    block(3, W) += d_third(R, y, x);
    block(3, Z) -= sigma * I;
    J.col(4 * n).segment(0, n) = -w;
    J.col(4 * n).segment(n, n) = -x;
    J.col(4 * n).segment(2 * n, n) = -y;
    J.col(4 * n).segment(3 * n, n) = -z;
    const Eigen::MatrixXd gs = cd.g + cd.g.transpose();
    const std::array<const Eigen::VectorXd*, 4> vs{&w, &x, &y, &z};
    for (int k = 0; k < 4; ++k) J.block(4 * n + k, k * n, 1, n) = (gs * *vs[k]).transpose();
    return J;
}

SVPSolution solve_newton(const CurvatureData& cd, const Quadruple& q0, double sigma0,
                         const SolverConfig& cfg) {
    const int n = cd.dim();
    if (!q0.stacked().allFinite() || !std::isfinite(sigma0))
        throw InvalidInput("Newton start has non-finite entries");
    const SignPattern signs = q0.signs;
    Eigen::VectorXd u0(4 * n + 1);
    u0 << q0.stacked(), sigma0;
    ResidualFn f = [&](const Eigen::VectorXd& u) {
        return residual(cd, unpack(u, n, signs), u[4 * n]);
    };
    JacobianFn jac = [&](const Eigen::VectorXd& u) {
        return residual_jacobian(cd, unpack(u, n, signs), u[4 * n]);
    };
    NewtonOptions opts;
    opts.tol = cfg.tol;
    opts.max_iters = cfg.max_newton_iters;
    const NewtonOutcome res = least_squares_newton(f, jac, u0, opts);
    if (!res.converged)
        throw NoConvergence("Newton stopped after " + std::to_string(res.iterations) +
                            " iterations with residual " + std::to_string(res.residual));
    SVPSolution sol;
    sol.q = unpack(res.u, n, signs);
    sol.sigma = res.u[4 * n];
    if (sol.sigma < 0.0) {
        sol.q.w = -sol.q.w;
        sol.sigma = -sol.sigma;
    }
    sol.residual = residual_norm(cd, sol.q, sol.sigma);
    sol.trivial = is_trivial(sol.q, sol.sigma);
    if (sol.trivial) sol.label = "trivial family";
    return sol;
}

std::optional<Quadruple> random_start(const CurvatureData& cd, const SignPattern& signs,
                                      std::uint64_t seed) {
    const int n = cd.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cd.g + cd.g.transpose()));
    const Eigen::VectorXd lam = eig.eigenvalues();
    const bool has_pos = (lam.array() > 0.0).any();
    const bool has_neg = (lam.array() < 0.0).any();
    for (int s : signs)
        if ((s > 0 && !has_pos) || (s < 0 && !has_neg)) return std::nullopt;
    // Gaussian in an orthonormal frame of g.
    Eigen::MatrixXd frame = eig.eigenvectors();
    for (int k = 0; k < n; ++k) frame.col(k) /= std::sqrt(std::abs(lam[k]));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<Eigen::VectorXd, 4> v;
    for (int k = 0; k < 4; ++k) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            Eigen::VectorXd xi(n);
            for (int i = 0; i < n; ++i) xi[i] = normal(rng);
            const Eigen::VectorXd cand = frame * xi;
            const double nn = inner(cd.g, cand, cand);
            if (std::abs(nn) < 1e-6 || (nn > 0) != (signs[k] > 0)) continue;
            v[k] = cand / std::sqrt(std::abs(nn));
            ok = true;
        }
        if (!ok) return std::nullopt;
    }
    return from_slots(v, signs);
}

std::vector<double> MultistartResult::sigmas(double min_abs) const {
    std::vector<double> out;
    for (const auto& c : clusters)
        if (std::abs(c.sigma) >= min_abs) out.push_back(c.sigma);
    return out;
}

const SVPCluster* MultistartResult::nonzero(double eps) const {
    for (const auto& c : clusters)
        if (std::abs(c.sigma) > eps) return &c;
    return nullptr;
}

std::optional<SVPSolution> trivial_solution(const CurvatureData& cd, const SignPattern& signs,
                                            std::uint64_t seed) {
    if (signs[0] != signs[1] || signs[2] != signs[3]) return std::nullopt;
    auto start = random_start(cd, signs, seed);
    if (!start) return std::nullopt;
    SVPSolution t;
    t.q = *start;
    t.q.x = t.q.w;
    t.q.z = t.q.y;
    t.sigma = 0.0;
    t.residual = residual_norm(cd, t.q, 0.0);
    t.origin = SolutionOrigin::Analytic;
    t.seed = seed;
    t.trivial = true;
    t.label = "trivial family (X, X, Y, Y)";
    return t;
}

MultistartResult multistart(const CurvatureData& cd, const SolverConfig& cfg) {
    if (!(cfg.tol > 0.0) || cfg.n_starts < 1)
        throw ConfigError("solver config needs tol > 0 and n_starts >= 1");
    const std::vector<SignPattern> patterns =
        cfg.signs ? std::vector<SignPattern>{*cfg.signs} : all_patterns();
    MultistartResult result;
    const int threads = thread_count(cfg);
    for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
        const SignPattern signs = patterns[pi];
        std::vector<std::optional<SVPSolution>> found(cfg.n_starts);
        std::vector<char> attempted(cfg.n_starts, 0);
        parallel_for(cfg.n_starts, threads, [&](int i) {
            const std::uint64_t seed =
                splitmix64(cfg.rng_seed * 0x100000001B3ULL + pi * 1000003ULL + i);
            const auto start = random_start(cd, signs, seed);
            if (!start) return;
            attempted[i] = 1;
            const double s0 = signs[0] * curvature_form(cd, start->w, start->x, start->y, start->z);
            try {
                SVPSolution sol = solve_newton(cd, *start, s0, cfg);
                sol.seed = seed;
                sol.origin = SolutionOrigin::Multistart;
                found[i] = std::move(sol);
            } catch (const Error&) {
            }
        });
        std::vector<SVPSolution> sols;
        for (int i = 0; i < cfg.n_starts; ++i) {
            result.starts += attempted[i];
            if (found[i]) sols.push_back(std::move(*found[i]));
        }
        result.converged += static_cast<int>(sols.size());

        auto clusters = cluster_solutions(std::move(sols), signs, cfg.cluster_eps);
        const bool has_trivial =
            std::any_of(clusters.begin(), clusters.end(), [](const SVPCluster& c) { return c.trivial; });
        if (!has_trivial && signs[0] == signs[1] && signs[2] == signs[3]) {
            const auto t = trivial_solution(cd, signs, cfg.rng_seed);
            if (t && t->residual < cfg.tol) {
                auto zero = std::find_if(clusters.begin(), clusters.end(), [&](const SVPCluster& c) {
                    return std::abs(c.sigma) < cfg.cluster_eps;
                });
                if (zero != clusters.end()) {
                    zero->trivial = true;
                } else {
                    SVPCluster c;
                    c.signs = signs;
                    c.representative = *t;
                    c.members = 1;
                    c.distinct_orbits = 1;
                    c.trivial = true;
                    clusters.push_back(std::move(c));
                    std::stable_sort(clusters.begin(), clusters.end(),
                                     [](const SVPCluster& a, const SVPCluster& b) {
                                         return a.sigma < b.sigma;
                                     });
                }
            }
        }
        for (auto& c : clusters) result.clusters.push_back(std::move(c));
    }
    return result;
}

std::vector<SVPSolution> orbit(const SVPSolution& sol, const CurvatureData& cd, double tol) {
    const double r0 = residual_norm(cd, sol.q, sol.sigma);
    if (!(r0 < tol))
        throw InvalidInput("orbit: input residual " + std::to_string(r0) + " is not below tol");
    std::vector<SVPSolution> out;
    auto emit = [&](Quadruple q, double sigma, std::string label) {
        SVPSolution s;
        s.residual = residual_norm(cd, q, sigma);
        s.q = std::move(q);
        s.sigma = sigma;
        s.origin = SolutionOrigin::Orbit;
        s.seed = sol.seed;
        s.trivial = is_trivial(s.q, sigma);
        s.label = std::move(label);
        out.push_back(std::move(s));
    };
    const auto v = slots(sol.q);
    static const char* names[4] = {"W", "X", "Y", "Z"};
    for (int mask = 0; mask < 16; ++mask) {
        auto f = v;
        int sign = 1;
        std::string label = "flip(";
        for (int k = 0; k < 4; ++k) {
            const bool neg = (mask >> (3 - k)) & 1;
            if (neg) {
                f[k] = -f[k];
                sign = -sign;
            }
            label += std::string(neg ? "-" : "") + names[k] + (k < 3 ? "," : ")");
        }
        emit(from_slots(f, sol.q.signs), sign * sol.sigma, label);
    }
    for (std::size_t e = 1; e < kExchanges.size(); ++e) {
        const auto& ex = kExchanges[e];
        std::array<Eigen::VectorXd, 4> p;
        SignPattern s;
        for (int k = 0; k < 4; ++k) {
            p[k] = v[ex.perm[k]];
            s[k] = sol.q.signs[ex.perm[k]];
        }
        emit(from_slots(p, s), ex.sigma_sign * sol.sigma, std::string("swap") + ex.label);
    }
    if (std::abs(sol.sigma) > kZeroSigma) {
        const double h = 1.0 / std::sqrt(2.0);
        const auto& sg = sol.q.signs;
        const bool wx = sg[0] == sg[1], yz = sg[2] == sg[3];
        if (wx)
            emit(from_slots({h * (v[0] - v[1]), h * (v[0] + v[1]), v[2], v[3]}, sg), sol.sigma,
                 "rotate((W-X)/sqrt2,(W+X)/sqrt2,Y,Z)");
        if (yz)
            emit(from_slots({v[0], v[1], h * (v[2] - v[3]), h * (v[2] + v[3])}, sg), sol.sigma,
                 "rotate(W,X,(Y-Z)/sqrt2,(Y+Z)/sqrt2)");
        if (wx && yz)
            emit(from_slots({h * (v[0] + v[1]), h * (v[0] - v[1]), h * (v[2] + v[3]),
                             h * (v[2] - v[3])},
                            sg),
                 sol.sigma, "rotate((W+X)/sqrt2,(W-X)/sqrt2,(Y+Z)/sqrt2,(Y-Z)/sqrt2)");
    }
    return out;
}

double proposition1_defect(const SVPSolution& sol, const Eigen::MatrixXd& g) {
    if (std::abs(sol.sigma) <= kZeroSigma) return 0.0;
    return std::max(std::abs(inner(g, sol.q.w, sol.q.x)), std::abs(inner(g, sol.q.y, sol.q.z)));
}

bool check_proposition1(const SVPSolution& sol, const Eigen::MatrixXd& g) {
    return proposition1_defect(sol, g) < 1e-8;
}

std::vector<SVPSolution> meigen_reduce(const CurvatureData& cd, const SolverConfig& cfg) {
    const int n = cd.dim();
    const Tensor4& R = cd.riemann_mixed;
    const SignPattern base = cfg.signs.value_or(kAllPlus);
    const SignPattern signs{base[2], base[3], base[2], base[3]};
    const double sy = signs[2], sz = signs[3];
    ResidualFn f = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd y = u.segment(0, n), z = u.segment(n, n);
        const double s = u[2 * n];
        Eigen::VectorXd r(2 * n + 2);
        r.segment(0, n) = apply(R, z, y, z) - s * y;
        r.segment(n, n) = apply(R, y, z, y) - s * z;
        r[2 * n] = inner(cd.g, y, y) - sy;
        r[2 * n + 1] = inner(cd.g, z, z) - sz;
        return r;
    };
    JacobianFn jac = [&](const Eigen::VectorXd& u) {
        const Eigen::VectorXd y = u.segment(0, n), z = u.segment(n, n);
        const double s = u[2 * n];
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 1);
        J.block(0, 0, n, n) = d_second(R, z, z) - s * I;
        J.block(0, n, n, n) = d_first(R, y, z) + d_third(R, z, y);
        J.block(n, 0, n, n) = d_first(R, z, y) + d_third(R, y, z);
        J.block(n, n, n, n) = d_second(R, y, y) - s * I;
        J.col(2 * n).segment(0, n) = -y;
        J.col(2 * n).segment(n, n) = -z;
        const Eigen::MatrixXd gs = cd.g + cd.g.transpose();
        J.block(2 * n, 0, 1, n) = (gs * y).transpose();
        J.block(2 * n + 1, n, 1, n) = (gs * z).transpose();
        return J;
    };
    NewtonOptions opts;
    opts.tol = cfg.tol;
    opts.max_iters = cfg.max_newton_iters;

    std::vector<std::optional<SVPSolution>> found(cfg.n_starts);
    parallel_for(cfg.n_starts, thread_count(cfg), [&](int i) {
        const std::uint64_t seed = splitmix64(cfg.rng_seed * 0x100000001B3ULL + 0xE16E + i);
        const auto start = random_start(cd, signs, seed);
        if (!start) return;
        Eigen::VectorXd u0(2 * n + 1);
        u0 << start->y, start->z, sy * curvature_form(cd, start->y, start->z, start->y, start->z);
        try {
            const NewtonOutcome res = least_squares_newton(f, jac, u0, opts);
            if (!res.converged) return;
            SVPSolution s;
            s.q.y = res.u.segment(0, n);
            s.q.z = res.u.segment(n, n);
            s.q.w = s.q.y;
            s.q.x = s.q.z;
            s.q.signs = signs;
            s.sigma = res.u[2 * n];
            s.residual = residual_norm(cd, s.q, s.sigma);
            s.origin = SolutionOrigin::MEigen;
            s.seed = seed;
            s.trivial = is_trivial(s.q, s.sigma);
            if (s.residual < cfg.tol) found[i] = std::move(s);
        } catch (const Error&) {
        }
    });
    std::vector<SVPSolution> sols;
    for (auto& s : found)
        if (s) sols.push_back(std::move(*s));
    std::vector<SVPSolution> out;
    for (auto& c : cluster_solutions(std::move(sols), signs, cfg.cluster_eps))
        out.push_back(std::move(c.representative));
    return out;
}

LorentzCheckReport lorentz_mixed_sign_check(const CurvatureData& cd, const SolverConfig& cfg,
                                            const SignPattern& signs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cd.g + cd.g.transpose()),
                                                       Eigen::EigenvaluesOnly);
    if ((eig.eigenvalues().array() < 0.0).count() != 1)
        throw WrongSignature("mixed-sign check needs a Lorentzian metric");
    SolverConfig c = cfg;
    c.signs = signs;
    const MultistartResult ms = multistart(cd, c);
    LorentzCheckReport rep;
    rep.signs = signs;
    rep.starts = ms.starts;
    rep.converged = ms.converged;
    for (const auto& cl : ms.clusters)
        rep.max_abs_sigma = std::max(rep.max_abs_sigma, std::abs(cl.sigma));
    rep.pass = rep.converged > 0 && rep.max_abs_sigma < kZeroSigma;
    return rep;
}

double closed_form_sigma(ClosedFormCase c, const ClosedFormParams& p) {
    auto need = [](const auto& opt, const char* name) {
        if (!opt) throw BadCase(std::string("closed form needs parameter ") + name);
        return *opt;
    };
    if (c == ClosedFormCase::SpaceForm) return std::abs(need(p.kappa, "kappa"));
    const int n = need(p.n, "n");
    if (n < 3) throw BadCase("conformally flat closed forms need n >= 3");
    const double R = need(p.ricci_scalar, "ricci_scalar");
    const double trace = R / (n - 1);
    switch (c) {
        case ClosedFormCase::MEigenConformal:
            return (need(p.ricci_ww, "ricci_ww") + need(p.ricci_xx, "ricci_xx") - trace) / (n - 2);
        case ClosedFormCase::RicciEigenpairs:
            return (need(p.lambda, "lambda") + need(p.mu, "mu") - trace) / (n - 2);
        case ClosedFormCase::Einstein:
            return (2.0 * need(p.kappa, "kappa") - trace) / (n - 2);
        default:
            throw BadCase("unknown closed-form case");
    }
}

double space_form_identity_defect(const SVPSolution& sol, const Eigen::MatrixXd& g, double kappa) {
    const auto& q = sol.q;
    const double s = sol.sigma;
    auto ip = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return inner(g, a, b); };
    const double wy = ip(q.w, q.y), wz = ip(q.w, q.z);
    return std::max({std::abs(kappa * ip(q.z, q.x) - s * wy),
                     std::abs(-kappa * ip(q.y, q.x) - s * wz),
                     std::abs(-kappa * ip(q.z, q.w) - s * ip(q.x, q.y)),
                     std::abs(kappa * ip(q.y, q.w) - s * ip(q.x, q.z)),
                     std::abs(wy * wy + wz * wz - 1.0)});
}

double ricci_quadratic_defect(const SVPSolution& sol, const CurvatureData& cd) {
    const Eigen::MatrixXd ric = ricci(cd);
    const auto& q = sol.q;
    auto quad = [&](const Eigen::VectorXd& v) { return v.dot(ric * v); };
    return std::abs(quad(q.w) + quad(q.x) - quad(q.y) - quad(q.z));
}

double schwarzschild_det_defect(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
    if (y.size() != 4 || z.size() != 4) throw InvalidInput("det(S) identity needs 4-vectors");
    auto S = [&](int i, int j) { return y[i] * z[j] - y[j] * z[i]; };
    Eigen::Matrix4d m;
    m << 0, 2 * S(0, 1), S(2, 0), S(3, 0),
         2 * S(0, 1), 0, S(2, 1), S(3, 1),
         S(2, 0), S(1, 2), 0, 2 * S(2, 3),
         S(3, 0), S(1, 3), 2 * S(3, 2), 0;
    const double lhs = m.determinant();
    const double t = 2 * S(0, 1) * 2 * S(2, 3) + S(2, 0) * S(1, 3) + S(3, 0) * S(2, 1);
    const double rhs = -t * t;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::pow(m.cwiseAbs().maxCoeff(), 4), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

double sigma_form_defect(const SVPSolution& sol, const CurvatureData& cd) {
    return std::abs(sol.sigma - sol.q.signs[0] * curvature_form(cd, sol.q.w, sol.q.x, sol.q.y, sol.q.z));
}

}  // namespace rsv
