// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "rsv/algebra.hpp"
#include "rsv/catalog.hpp"
#include "rsv/errors.hpp"
#include "rsv/reduced.hpp"
#include "rsv/svp.hpp"

using namespace rsv;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the worst observation per quantity and the first failure message.
struct Tally {
    bool ok = true;
    std::string first_failure;
    std::vector<std::pair<std::string, double>> worst;

    void record(const std::string& what, double value, double limit) {
        auto it = std::find_if(worst.begin(), worst.end(), [&](const auto& w) { return w.first == what; });
        if (it == worst.end())
            worst.emplace_back(what, value);
        else
            it->second = std::max(it->second, value);
        if (!(value < limit)) fail(what + " = " + fmt(value) + " (limit " + fmt(limit) + ")");
    }
    void fail(const std::string& msg) {
        if (ok) first_failure = msg;
        ok = false;
    }
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    std::string summary() const {
        std::string s;
        for (const auto& [k, v] : worst) s += (s.empty() ? "" : ", ") + k + " " + fmt(v);
        if (!ok) s += "; first failure: " + first_failure;
        return s;
    }
};

int failures = 0;

void report(int id, const std::string& name, const std::function<void(Tally&)>& body) {
    Tally t;
    const auto t0 = Clock::now();
    try {
        body(t);
    } catch (const std::exception& e) {
        t.fail(std::string("exception: ") + e.what());
    }
    if (!t.ok) ++failures;
    std::printf("%s  criterion %d  %-28s %.2fs  [%s]\n", t.ok ? "PASS" : "FAIL", id, name.c_str(), seconds_since(t0),
                t.summary().c_str());
    std::fflush(stdout);
}

SolverConfig config(int starts, std::uint64_t seed) {
    SolverConfig c;
    c.n_starts = starts;
    c.rng_seed = seed;
    return c;
}

std::pair<int, std::string> run_command(const std::string& cmd) {
    std::FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void criterion1(Tally& t) {
    const auto t0 = Clock::now();
    const CurvatureData cd = riemann(sphere2().spec, Point{{pi / 3, 0.0}});
    const MultistartResult r = multistart(cd, SolverConfig{});
    const SVPCluster* c = r.nonzero();
    if (!c) return t.fail("no nonzero cluster");
    t.record("|sigma-1|", std::abs(c->sigma - 1.0), 1e-8);
    t.record("residual", c->representative.residual, 1e-10);
    const bool trivial = std::any_of(r.clusters.begin(), r.clusters.end(),
                                     [](const SVPCluster& k) { return k.trivial && std::abs(k.sigma) < 1e-8; });
    if (!trivial) t.fail("trivial family missing");
    t.record("seconds", seconds_since(t0), 5.0);
}

void criterion2(Tally& t) {
    for (double k : {-2.0, -0.5, 0.5, 1.0, 2.0})
        for (int n : {3, 4}) {
            const CatalogEntry e = space_form(k, n);
            const MultistartResult r = multistart(riemann(e.spec, e.default_point), config(100, 2));
            const auto s = r.sigmas(1e-8);
            if (s.size() != 1) {
                t.fail("kappa " + Tally::fmt(k) + " n " + std::to_string(n) + ": " + std::to_string(s.size()) +
                       " nonzero clusters");
                continue;
            }
            t.record("|sigma-|kappa||", std::abs(s[0] - std::abs(k)), 1e-8);
        }
    for (int n : {3, 4}) {
        const CatalogEntry e = space_form(0.0, n);
        if (multistart(riemann(e.spec, e.default_point), config(100, 2)).nonzero()) t.fail("flat space has nonzero sigma");
    }
}

void criterion3(Tally& t) {
    for (double M : {1.0, 2.0})
        for (double f : {3.0, 5.0, 10.0}) {
            const double r = f * M;
            const ReducedSolveResult res = schwarzschild_reduced_solve(M, r, pi / 3);
            const double expect = M / std::pow(r, 3);
            t.record("|sigma-M/r^3|", std::abs(res.solution.sigma - expect), 1e-10);
            const double K = 48.0 * M * M / std::pow(r, 6);
            t.record("K1 rel", std::abs(res.kretschmann - K) / K, 1e-10);
            t.record("|sigma-sqrt(K1/48)|", std::abs(res.solution.sigma - std::sqrt(res.kretschmann / 48.0)), 1e-10);
        }
}

void criterion4(Tally& t) {
    std::mt19937_64 rng(4);
    for (double a : {0.3, 0.5, 0.9}) {
        const CatalogEntry e = kerr(1.0, a);
        for (int i = 0; i < 10; ++i) {
            const Point p = e.sample(rng);
            const double r = p[1], th = p[2];
            const ReducedSolveResult res = kerr_reduced_solve(1.0, a, r, th);
            const NPScalars psi = np_scalars(riemann(e.spec, p), kerr_tetrad(1.0, a, r, th));
            for (int k : {0, 1, 3, 4}) t.record("|Psi_k|, k!=2", std::abs(psi[k]), 1e-8);
            const Complex expect = 1.0 / std::pow(Complex(r, -a * std::cos(th)), 3);
            t.record("|Psi2-M/(r-ia cos)^3|", std::abs(psi[2] - expect), 1e-8);
            const Complex I = *res.invariant_I;
            t.record("|sigma-sqrt((|I|+ReI)/6)|",
                     std::abs(res.solution.sigma - std::sqrt((std::abs(I) + I.real()) / 6.0)), 1e-8);
        }
    }
    for (double r : {3.0, 5.0, 10.0})
        t.record("a->0 vs M/r^3", std::abs(kerr_reduced_solve(1.0, 1e-9, r, 1.0).solution.sigma - 1.0 / std::pow(r, 3)),
                 1e-8);
}

void criterion5(Tally& t) {
    for (int n : {3, 4, 5}) {
        ClosedFormParams p;
        p.n = n;
        p.kappa = n - 1.0;  // R_ij = (n-1) g_ij on the unit sphere
        p.ricci_scalar = n * (n - 1.0);
        const double s3 = closed_form_sigma(ClosedFormCase::Einstein, p);
        t.record("|einstein-1|", std::abs(s3 - 1.0), 1e-12);
        const CatalogEntry e = space_form(1.0, n);
        const SVPCluster* c = multistart(riemann(e.spec, e.default_point), config(100, 5)).nonzero();
        if (!c) {
            t.fail("unit sphere n=" + std::to_string(n) + " has no nonzero cluster");
            continue;
        }
        t.record("|einstein-multistart|", std::abs(s3 - c->sigma), 1e-8);
        p.lambda = p.mu = *p.kappa;
        t.record("|eigenpairs-einstein|", std::abs(closed_form_sigma(ClosedFormCase::RicciEigenpairs, p) - s3), 1e-12);
    }
}

struct PropertyTarget {
    CatalogEntry entry;
    std::optional<double> kappa;  // set on space forms
};

void criterion6(Tally& t) {
    const auto t0 = Clock::now();
    std::vector<PropertyTarget> targets{{sphere2(), 1.0},          {space_form(1.0, 3), 1.0},
                                        {space_form(-0.5, 4), -0.5}, {space_form(2.0, 4), 2.0},
                                        {space_form(0.0, 3), 0.0},   {euclidean(3), std::nullopt},
                                        {minkowski(), std::nullopt}, {schwarzschild(1.0), std::nullopt},
                                        {kerr(1.0, 0.5), std::nullopt}};
    std::mt19937_64 rng(6);
    int solutions = 0;
    for (const auto& [e, kappa] : targets) {
        for (int i = 0; i < 20; ++i) {
            const Point p = e.sample(rng);
            const CurvatureData cd = riemann(e.spec, p);
            const bool analytic = cd.source == CurvatureSource::Analytic;
            const SymmetryReport sym = verify_tensor_symmetries(cd, analytic ? 1e-10 : 1e-6);
            const double sd = std::max({sym.first_pair, sym.second_pair, sym.pair_exchange}) / sym.scale;
            t.record(analytic ? "symmetry (analytic)" : "symmetry (numeric)", sd, analytic ? 1e-10 : 1e-6);
            t.record(analytic ? "bianchi (analytic)" : "bianchi (numeric)", sym.bianchi / sym.scale,
                     analytic ? 1e-10 : 1e-6);

            const MultistartResult ms = multistart(cd, config(30, i));
            std::vector<SVPSolution> sols;
            for (const auto& c : ms.clusters) sols.push_back(c.representative);
            if (e.spec.id == "schwarzschild") sols.push_back(schwarzschild_reduced_solve(1.0, p[1], p[2]).solution);
            for (const SVPSolution& s : sols) {
                ++solutions;
                const bool nonzero = std::abs(s.sigma) > 1e-8;
                if (nonzero) t.record("orthogonality", proposition1_defect(s, cd.g), 1e-8);
                double worst = 0.0;
                for (const auto& m : orbit(s, cd, 1e-9)) worst = std::max(worst, m.residual);
                t.record("orbit residual", worst, 1e-9);
                if (kappa && nonzero) {
                    t.record("space-form identities", space_form_identity_defect(s, cd.g, *kappa), 1e-8);
                    if (cd.dim() == 4) t.record("ricci quadratic", ricci_quadratic_defect(s, cd), 1e-8);
                }
                if (e.spec.id == "schwarzschild") {
                    t.record("det(S) rel", schwarzschild_det_defect(s.q.y, s.q.z), 1e-8);
                    t.record("det(S) rel", schwarzschild_det_defect(s.q.w, s.q.x), 1e-8);
                }
            }
            if (e.spec.is_lorentzian()) {
                const LorentzCheckReport lr = lorentz_mixed_sign_check(cd, config(100, i));
                t.record("mixed-sign |sigma|", lr.max_abs_sigma, 1e-8);
                if (lr.converged == 0) t.fail(e.spec.id + ": no mixed-sign start converged");
            }
        }
    }
    t.record("solutions checked (>0)", 1.0 / std::max(solutions, 1), 1.0);
    t.record("seconds", seconds_since(t0), 120.0);
}

void criterion7(Tally& t) {
    const CatalogEntry e = schwarzschild(1.0);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const Point p = e.sample(rng);
        const CurvatureData a = riemann(e.spec, p, DerivativePath::Auto);
        const CurvatureData n = riemann(e.spec, p, DerivativePath::Numeric);
        const double rel = max_abs_difference(a.riemann_mixed, n.riemann_mixed) / a.riemann_mixed.max_abs();
        t.record("fd vs analytic rel", rel, 1e-6);
    }
}

void criterion8(Tally& t) {
    const std::string exe = RSV_EXECUTABLE;
    const std::string svp = "'" + exe + "' svp --metric sphere2 --seed 7 --deterministic --output json";
    const auto a = run_command(svp), b = run_command(svp);
    if (a.first != 0 || b.first != 0) t.fail("svp exit codes " + std::to_string(a.first) + "," + std::to_string(b.first));
    if (a.second.empty() || a.second != b.second) t.fail("svp outputs differ");
    const auto v = run_command("'" + exe + "' verify --metric '" + std::string(RSV_DATA_DIR) +
                               "/metrics/corrupted.metric' --deterministic > /dev/null 2>&1");
    if (v.first != 5) t.fail("corrupted verify exit " + std::to_string(v.first));
    t.record("output bytes differing", a.second == b.second ? 0.0 : 1.0, 0.5);
}

}  // namespace

int main() {
    report(1, "sphere", criterion1);
    report(2, "space forms", criterion2);
    report(3, "schwarzschild", criterion3);
    report(4, "kerr", criterion4);
    report(5, "einstein closed forms", criterion5);
    report(6, "property suites", criterion6);
    report(7, "numeric vs analytic", criterion7);
    report(8, "cli determinism", criterion8);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
