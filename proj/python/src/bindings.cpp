#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rsv/algebra.hpp"
#include "rsv/catalog.hpp"
#include "rsv/cli.hpp"
#include "rsv/errors.hpp"
#include "rsv/metric_file.hpp"
#include "rsv/reduced.hpp"
#include "rsv/svp.hpp"

namespace py = pybind11;
using namespace rsv;

namespace {

struct Resolved {
    MetricSpec spec;
    std::optional<Point> default_point;
    std::optional<NPTetrad> tetrad;
};

Resolved resolve(const std::string& metric, const Params& params, const std::optional<Point>& point) {
    Resolved r;
    const bool is_file = metric.find('/') != std::string::npos || metric.ends_with(".metric");
    if (is_file) {
        UserMetric m = load_metric_file(metric, params);
        r.spec = std::move(m.spec);
        r.default_point = m.default_point;
    } else {
        CatalogEntry e = make_catalog_entry(metric, params);
        r.spec = e.spec;
        r.default_point = e.default_point;
        const Point p = point ? *point : e.default_point;
        if (e.tetrad && e.admissible && e.admissible(p)) r.tetrad = e.tetrad(p);
    }
    return r;
}

CurvatureData curvature_at(const Resolved& r, const std::optional<Point>& point) {
    if (point) return riemann(r.spec, *point);
    if (!r.default_point) throw ConfigError("metric has no default point; pass point=");
    return riemann(r.spec, *r.default_point);
}

py::array_t<double> to_numpy(const Tensor3& t) {
    const auto n = static_cast<py::ssize_t>(t.dim());
    py::array_t<double> a({n, n, n});
    std::copy(t.data().begin(), t.data().end(), a.mutable_data());
    return a;
}

py::array_t<double> to_numpy(const Tensor4& t) {
    const auto n = static_cast<py::ssize_t>(t.dim());
    py::array_t<double> a({n, n, n, n});
    std::copy(t.data().begin(), t.data().end(), a.mutable_data());
    return a;
}

py::dict solution_dict(const SVPSolution& s) {
    py::dict d;
    d["sigma"] = s.sigma;
    d["residual"] = s.residual;
    d["origin"] = to_string(s.origin);
    d["signs"] = to_string(s.q.signs);
    d["trivial"] = s.trivial;
    d["label"] = s.label;
    d["seed"] = s.seed;
    d["w"] = s.q.w;
    d["x"] = s.q.x;
    d["y"] = s.q.y;
    d["z"] = s.q.z;
    return d;
}

SVPSolution make_solution(const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& z, double sigma, const std::string& signs) {
    SVPSolution s;
    s.q.w = w;
    s.q.x = x;
    s.q.y = y;
    s.q.z = z;
    s.q.signs = parse_sign_pattern(signs);
    s.sigma = sigma;
    return s;
}

py::dict reduced_dict(const ReducedSolveResult& r) {
    py::dict d = solution_dict(r.solution);
    d["reduced_residual"] = r.reduced_residual;
    d["full_residual"] = r.full_residual;
    d["kretschmann"] = r.kretschmann;
    d["det_identity_defect"] = r.det_identity_defect;
    if (r.psi2) d["psi2"] = *r.psi2;
    if (r.invariant_I) d["invariant_I"] = *r.invariant_I;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Riemann tensor singular value problem";

    // Each category subclasses RsvError and the closest builtin exception.
    auto make = [&m](const char* name, PyObject* bases) {
        PyObject* type = PyErr_NewException((std::string("riemann_svp._core.") + name).c_str(), bases, nullptr);
        m.add_object(name, py::handle(type));
        return type;
    };
    static PyObject* base = make("RsvError", PyExc_Exception);
    static PyObject* config = make("ConfigError", py::make_tuple(py::handle(base), py::handle(PyExc_ValueError)).ptr());
    static PyObject* domain =
        make("DomainError", py::make_tuple(py::handle(base), py::handle(PyExc_ArithmeticError)).ptr());
    static PyObject* convergence =
        make("ConvergenceError", py::make_tuple(py::handle(base), py::handle(PyExc_RuntimeError)).ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyObject* type = base;
            switch (e.category()) {
                case Error::Category::Config: type = config; break;
                case Error::Category::Domain: type = domain; break;
                case Error::Category::Convergence: type = convergence; break;
                default: break;
            }
            PyErr_SetString(type, e.what());
        }
    });

    m.def("catalog_ids", &catalog_ids);
    m.def("catalog_description", &catalog_description, py::arg("id"));

    m.def(
        "curvature",
        [](const std::string& metric, const Params& params, const std::optional<Point>& point) {
            const CurvatureData cd = curvature_at(resolve(metric, params, point), point);
            py::dict d;
            d["point"] = cd.point;
            d["g"] = cd.g;
            d["g_inv"] = cd.g_inv;
            d["gamma"] = to_numpy(cd.gamma);
            d["riemann_mixed"] = to_numpy(cd.riemann_mixed);
            d["riemann_lowered"] = to_numpy(cd.riemann_lowered);
            d["source"] = cd.source == CurvatureSource::Analytic ? "analytic" : "numeric";
            return d;
        },
        py::arg("metric"), py::arg("params") = Params{}, py::arg("point") = py::none());

    m.def(
        "invariants",
        [](const std::string& metric, const Params& params, const std::optional<Point>& point) {
            const Resolved r = resolve(metric, params, point);
            const InvariantReport rep = invariants(curvature_at(r, point), r.tetrad);
            py::dict d;
            d["ricci_scalar"] = rep.ricci_scalar;
            d["kretschmann"] = rep.kretschmann;
            d["weyl_contraction"] = rep.weyl_contraction;
            d["np_scalars"] = rep.np ? py::cast(std::vector<Complex>(rep.np->begin(), rep.np->end())) : py::none();
            d["invariant_I"] = rep.invariant_I;
            return d;
        },
        py::arg("metric"), py::arg("params") = Params{}, py::arg("point") = py::none());

    m.def(
        "residual",
        [](const std::string& metric, const Params& params, const std::optional<Point>& point,
           const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
           double sigma, const std::string& signs) {
            const CurvatureData cd = curvature_at(resolve(metric, params, point), point);
            return residual(cd, make_solution(w, x, y, z, sigma, signs).q, sigma);
        },
        py::arg("metric"), py::arg("params"), py::arg("point"), py::arg("w"), py::arg("x"), py::arg("y"),
        py::arg("z"), py::arg("sigma"), py::arg("signs") = "++++");

    m.def(
        "multistart",
        [](const std::string& metric, const Params& params, const std::optional<Point>& point,
           const std::string& signs, int starts, std::uint64_t seed, double tol, int threads) {
            const CurvatureData cd = curvature_at(resolve(metric, params, point), point);
            SolverConfig cfg;
            cfg.n_starts = starts;
            cfg.rng_seed = seed;
            cfg.tol = tol;
            cfg.threads = threads;
            cfg.signs = signs == "all" ? std::nullopt : std::optional<SignPattern>(parse_sign_pattern(signs));
            MultistartResult res;
            {
                py::gil_scoped_release release;
                res = multistart(cd, cfg);
            }
            py::list out;
            for (const auto& c : res.clusters) {
                py::dict d = solution_dict(c.representative);
                d["sigma"] = c.sigma;
                d["members"] = c.members;
                d["distinct_orbits"] = c.distinct_orbits;
                d["trivial"] = c.trivial;
                out.append(d);
            }
            return out;
        },
        py::arg("metric"), py::arg("params") = Params{}, py::arg("point") = py::none(), py::arg("signs") = "++++",
        py::arg("starts") = 200, py::arg("seed") = 0, py::arg("tol") = 1e-11, py::arg("threads") = 0);

    m.def(
        "orbit",
        [](const std::string& metric, const Params& params, const std::optional<Point>& point,
           const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
           double sigma, const std::string& signs, double tol) {
            const CurvatureData cd = curvature_at(resolve(metric, params, point), point);
            SVPSolution s = make_solution(w, x, y, z, sigma, signs);
            s.residual = residual_norm(cd, s.q, sigma);
            py::list out;
            for (const auto& o : orbit(s, cd, tol)) out.append(solution_dict(o));
            return out;
        },
        py::arg("metric"), py::arg("params"), py::arg("point"), py::arg("w"), py::arg("x"), py::arg("y"),
        py::arg("z"), py::arg("sigma"), py::arg("signs") = "++++", py::arg("tol") = 1e-9);

    m.def(
        "schwarzschild_reduced",
        [](double M, double r, double theta) { return reduced_dict(schwarzschild_reduced_solve(M, r, theta)); },
        py::arg("M"), py::arg("r"), py::arg("theta"));
    m.def(
        "kerr_reduced",
        [](double M, double a, double r, double theta) { return reduced_dict(kerr_reduced_solve(M, a, r, theta)); },
        py::arg("M"), py::arg("a"), py::arg("r"), py::arg("theta"));

    m.def(
        "closed_form_sigma",
        [](const std::string& which, std::optional<double> kappa, std::optional<double> ricci_scalar,
           std::optional<int> n, std::optional<double> lam, std::optional<double> mu,
           std::optional<double> ricci_ww, std::optional<double> ricci_xx) {
            ClosedFormCase c;
            if (which == "space-form") c = ClosedFormCase::SpaceForm;
            else if (which == "m-eigen-conformal") c = ClosedFormCase::MEigenConformal;
            else if (which == "ricci-eigenpairs") c = ClosedFormCase::RicciEigenpairs;
            else if (which == "einstein") c = ClosedFormCase::Einstein;
            else throw BadCase("unknown closed-form case '" + which + "'");
            ClosedFormParams p;
            p.kappa = kappa;
            p.ricci_scalar = ricci_scalar;
            p.n = n;
            p.lambda = lam;
            p.mu = mu;
            p.ricci_ww = ricci_ww;
            p.ricci_xx = ricci_xx;
            return closed_form_sigma(c, p);
        },
        py::arg("case"), py::kw_only(), py::arg("kappa") = py::none(), py::arg("ricci_scalar") = py::none(),
        py::arg("n") = py::none(), py::arg("lam") = py::none(), py::arg("mu") = py::none(),
        py::arg("ricci_ww") = py::none(), py::arg("ricci_xx") = py::none());

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "rsv");
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the rsv command line in-process; returns (exit_code, stdout, stderr).");
}
