#include "rsv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "rsv/algebra.hpp"
#include "rsv/catalog.hpp"
#include "rsv/errors.hpp"
#include "rsv/expr.hpp"
#include "rsv/metric_file.hpp"
#include "rsv/reduced.hpp"
#include "rsv/svp.hpp"

namespace rsv {
namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "0.1.0";
constexpr double kNonzeroSigma = 1e-8;
constexpr double kIdentityTol = 1e-8;
constexpr double kOrbitTol = 1e-9;

struct RunConfig {
    std::string command;
    std::string metric;
    std::string params_text;
    std::string point_text;
    std::string signs = "++++";
    double tol = 1e-11;
    int starts = 200;
    std::uint64_t seed = 0;
    std::string method = "auto";
    std::string output = "json";
    std::string out_path;
    bool deterministic = false;
    int threads = 0;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// "M=1,a=0.5"; values may be constant expressions such as pi/4.
Params parse_params(const std::string& text) {
    Params p;
    if (trim(text).empty()) return p;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("--params entry '" + item + "' is not key=value");
        const std::string key = trim(item.substr(0, eq));
        if (key.empty()) throw ConfigError("--params entry '" + item + "' has an empty key");
        p[key] = Expression::parse(trim(item.substr(eq + 1)), {})({});
    }
    return p;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> v;
    for (const auto& item : split(text, ',')) v.push_back(Expression::parse(trim(item), {})({}));
    return v;
}

struct ResolvedMetric {
    std::string id;
    bool catalog = false;
    CatalogEntry entry;
    Point point;
};

ResolvedMetric resolve(const RunConfig& cfg) {
    if (cfg.metric.empty()) throw ConfigError("--metric is required");
    ResolvedMetric r;
    const Params params = parse_params(cfg.params_text);
    const auto& ids = catalog_ids();
    if (std::find(ids.begin(), ids.end(), cfg.metric) != ids.end()) {
        r.id = cfg.metric;
        r.catalog = true;
        r.entry = make_catalog_entry(cfg.metric, params);
    } else {
        UserMetric um = load_metric_file(cfg.metric, params);
        r.id = um.spec.id;
        r.entry.spec = um.spec;
        r.entry.params = um.params;
        r.entry.coordinates = um.coordinates;
        r.entry.admissible = [](const Point& p) { return p.allFinite(); };
        if (um.default_point) r.entry.default_point = *um.default_point;
    }
    const int n = r.entry.spec.dimension;
    if (!cfg.point_text.empty()) {
        const auto v = parse_point(cfg.point_text);
        r.point = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else {
        if (r.entry.default_point.size() == 0) throw ConfigError("--point is required for this metric");
        r.point = r.entry.default_point;
    }
    if (r.point.size() != n)
        throw ConfigError("point has " + std::to_string(r.point.size()) + " coordinates, metric dimension is " +
                          std::to_string(n));
    if (r.entry.admissible && !r.entry.admissible(r.point))
        throw OutOfDomain("point lies outside the admissible domain of '" + r.id + "'");
    return r;
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json complex_json(const Complex& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json invariants_json(const InvariantReport& rep) {
    json j;
    j["ricci_scalar"] = rep.ricci_scalar;
    j["kretschmann"] = rep.kretschmann;
    json w;
    w["present"] = rep.weyl_contraction.has_value();
    w["contraction"] = rep.weyl_contraction ? json(*rep.weyl_contraction) : json(nullptr);
    w["norm"] = rep.weyl_norm ? json(*rep.weyl_norm) : json(nullptr);
    j["weyl"] = w;
    if (rep.np) {
        json np = json::array();
        for (const auto& psi : *rep.np) np.push_back(complex_json(psi));
        j["np_scalars"] = np;
        j["invariant_I"] = complex_json(*rep.invariant_I);
    } else {
        j["np_scalars"] = nullptr;
        j["invariant_I"] = nullptr;
    }
    return j;
}

json quadruple_json(const Quadruple& q) {
    return json{{"w", vec_json(q.w)}, {"x", vec_json(q.x)}, {"y", vec_json(q.y)}, {"z", vec_json(q.z)}};
}

json solution_json(const SVPSolution& s) {
    json j;
    j["sigma"] = s.sigma;
    j["residual"] = s.residual;
    j["origin"] = to_string(s.origin);
    j["signs"] = to_string(s.q.signs);
    j["trivial"] = s.trivial;
    j["label"] = s.label;
    j["seed"] = s.seed;
    j["quadruple"] = quadruple_json(s.q);
    return j;
}

std::size_t orbit_size(const SVPSolution& s, const CurvatureData& cd, double tol) {
    try {
        return orbit(s, cd, std::max(10.0 * tol, kOrbitTol)).size();
    } catch (const Error&) {
        return 0;
    }
}

SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    if (cfg.starts < 1) throw ConfigError("--starts must be at least 1");
    sc.tol = cfg.tol;
    sc.n_starts = cfg.starts;
    sc.rng_seed = cfg.seed;
    sc.threads = cfg.threads;
    if (cfg.signs == "all") sc.signs = std::nullopt;
    else sc.signs = parse_sign_pattern(cfg.signs);
    return sc;
}

std::string chosen_method(const RunConfig& cfg, const ResolvedMetric& m) {
    if (cfg.method != "auto" && cfg.method != "multistart" && cfg.method != "reduced")
        throw ConfigError("--method must be auto, multistart or reduced");
    const bool has_reduced = m.catalog && (m.id == "schwarzschild" || m.id == "kerr");
    if (cfg.method == "reduced" && !has_reduced)
        throw ConfigError("--method reduced is available for schwarzschild and kerr only");
    if (cfg.method == "auto") return has_reduced ? "reduced" : "multistart";
    return cfg.method;
}

struct SolveOutcome {
    std::string method;
    std::vector<SVPSolution> solutions;
    std::vector<json> extra;  // per-solution fields beyond solution_json
    int starts = 0;
    int converged = 0;
    bool exhaustive = false;
};

SolveOutcome solve(const RunConfig& cfg, const ResolvedMetric& m, const CurvatureData& cd) {
    SolveOutcome o;
    o.method = chosen_method(cfg, m);
    const SolverConfig sc = solver_config(cfg);
    if (o.method == "reduced") {
        if (sc.signs && *sc.signs != kAllPlus)
            throw ConfigError("the reduced solvers produce the (+,+,+,+) family; use --signs ++++ or all");
        const double M = m.entry.params.at("M");
        ReducedSolveResult rr = m.id == "schwarzschild"
                                    ? schwarzschild_reduced_solve(M, m.point[1], m.point[2])
                                    : kerr_reduced_solve(M, m.entry.params.at("a"), m.point[1], m.point[2]);
        if (auto t = trivial_solution(cd, kAllPlus, sc.rng_seed)) {
            o.solutions.push_back(*t);
            o.extra.push_back(json{{"members", 1}, {"distinct_orbits", 1}});
        }
        json x{{"members", 1}, {"distinct_orbits", 1}, {"reduced_residual", rr.reduced_residual},
               {"full_residual", rr.full_residual}};
        if (m.id == "schwarzschild") {
            x["det_identity_defect"] = rr.det_identity_defect;
            x["sqrt_k1_over_48"] = std::sqrt(rr.kretschmann / 48.0);
        } else {
            const Complex I = *rr.invariant_I;
            x["psi2"] = complex_json(*rr.psi2);
            x["invariant_sigma"] = std::sqrt((std::abs(I) + I.real()) / 6.0);
            json tc = json::array();
            for (const auto& c : *rr.tetrad_components) tc.push_back(complex_json(c));
            x["tetrad_components"] = tc;
        }
        o.solutions.push_back(rr.solution);
        o.extra.push_back(x);
        o.starts = 1;
        o.converged = 1;
        return o;
    }
    const MultistartResult ms = multistart(cd, sc);
    for (const auto& c : ms.clusters) {
        o.solutions.push_back(c.representative);
        o.extra.push_back(json{{"members", c.members}, {"distinct_orbits", c.distinct_orbits}});
        if (c.trivial && !c.representative.trivial) o.extra.back()["contains_trivial_family"] = true;
    }
    o.starts = ms.starts;
    o.converged = ms.converged;
    o.exhaustive = ms.exhaustive;
    return o;
}

json config_json(const RunConfig& cfg, const ResolvedMetric& m) {
    json c;
    c["metric"] = m.id;
    c["source"] = m.catalog ? "catalog" : cfg.metric;
    json p = json::object();
    for (const auto& [k, v] : m.entry.params) p[k] = v;
    c["params"] = p;
    c["coordinates"] = m.entry.coordinates;
    c["point"] = vec_json(m.point);
    c["signs"] = cfg.signs;
    c["tol"] = cfg.tol;
    c["starts"] = cfg.starts;
    c["seed"] = cfg.seed;
    c["method"] = cfg.method;
    return c;
}

json header(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = {{"name", "rsv"}, {"version", kToolVersion}};
    j["command"] = cfg.command;
    if (!cfg.deterministic) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["timestamp"] = buf;
    }
    return j;
}

std::optional<NPTetrad> tetrad_for(const ResolvedMetric& m) {
    if (!m.entry.tetrad) return std::nullopt;
    return m.entry.tetrad(m.point);
}

json solutions_json(const SolveOutcome& o, const CurvatureData& cd, double tol) {
    json arr = json::array();
    for (std::size_t i = 0; i < o.solutions.size(); ++i) {
        json s = solution_json(o.solutions[i]);
        for (const auto& [k, v] : o.extra[i].items()) s[k] = v;
        s["orbit_size"] = orbit_size(o.solutions[i], cd, tol);
        arr.push_back(s);
    }
    return arr;
}

json expected_json(const ResolvedMetric& m, const SolveOutcome& o) {
    if (!m.entry.expected_sigma) return nullptr;
    json e;
    const auto expected = m.entry.expected_sigma(m.point);
    e["sigma"] = expected;
    json matched = json::array();
    for (double s : expected) {
        const bool hit = std::any_of(o.solutions.begin(), o.solutions.end(), [&](const SVPSolution& x) {
            return std::abs(x.sigma - s) < kIdentityTol;
        });
        matched.push_back(hit);
    }
    e["found"] = matched;
    return e;
}

// ---- checks ----

struct Check {
    std::string name;
    std::string status;  // pass, fail, skipped
    double max_defect = 0.0;
    double threshold = 0.0;
    std::string detail;
};

Check make_check(const std::string& name, double defect, double threshold, std::string detail = "") {
    return Check{name, defect <= threshold ? "pass" : "fail", defect, threshold, std::move(detail)};
}

Check skipped(const std::string& name, std::string why) { return Check{name, "skipped", 0.0, 0.0, std::move(why)}; }

std::vector<Check> run_checks(const RunConfig& cfg, const ResolvedMetric& m, const CurvatureData& cd) {
    std::vector<Check> checks;
    const double sym_tol = cd.source == CurvatureSource::Analytic ? 1e-10 : 1e-6;
    const SymmetryReport sr = verify_tensor_symmetries(cd, sym_tol);
    checks.push_back(make_check("symmetries", sr.max_symmetry_defect() / sr.scale, sym_tol));
    checks.push_back(make_check("bianchi", sr.bianchi / sr.scale, sym_tol));

    std::vector<SVPSolution> sols;
    std::string solve_error;
    try {
        sols = solve(cfg, m, cd).solutions;
    } catch (const Error& e) {
        solve_error = e.what();
    }
    const std::string names[] = {"prop1", "orbit-closure", "det-S", "example2-identities",
                                 "example3-byproduct", "sigma-equals-R"};
    if (!solve_error.empty()) {
        for (const auto& n : names) checks.push_back(Check{n, "fail", 0.0, 0.0, "solve failed: " + solve_error});
        return checks;
    }
    std::vector<const SVPSolution*> nonzero;
    for (const auto& s : sols)
        if (std::abs(s.sigma) > kNonzeroSigma) nonzero.push_back(&s);

    if (nonzero.empty()) {
        checks.push_back(skipped("prop1", "no nonzero sigma found"));
    } else {
        double d = 0.0;
        for (const auto* s : nonzero) d = std::max(d, proposition1_defect(*s, cd.g));
        checks.push_back(make_check("prop1", d, kIdentityTol));
    }

    {
        double d = 0.0;
        std::size_t count = 0;
        std::string detail;
        for (const auto& s : sols) {
            try {
                for (const auto& t : orbit(s, cd, kOrbitTol)) {
                    d = std::max(d, t.residual);
                    ++count;
                }
            } catch (const Error& e) {
                d = std::max(d, s.residual);
                detail = e.what();
            }
        }
        if (sols.empty()) checks.push_back(skipped("orbit-closure", "no solutions"));
        else checks.push_back(make_check("orbit-closure", d, kOrbitTol,
                                         detail.empty() ? std::to_string(count) + " transforms" : detail));
    }

    const bool lorentz = (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (cd.g + cd.g.transpose()),
                                                                        Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .array() < 0.0)
                             .count() == 1;
    if (!lorentz) {
        checks.push_back(skipped("remark2-lorentz", "metric is not Lorentzian"));
    } else {
        SolverConfig sc = solver_config(cfg);
        sc.n_starts = std::min(sc.n_starts, 100);
        const LorentzCheckReport rep = lorentz_mixed_sign_check(cd, sc);
        Check c = make_check("remark2-lorentz", rep.max_abs_sigma, kNonzeroSigma,
                             std::to_string(rep.converged) + "/" + std::to_string(rep.starts) + " converged");
        if (rep.converged == 0) c.status = "fail";
        checks.push_back(c);
    }

    if (m.catalog && m.id == "schwarzschild" && !sols.empty()) {
        double d = 0.0;
        for (const auto& s : sols) d = std::max(d, schwarzschild_det_defect(s.q.y, s.q.z));
        checks.push_back(make_check("det-S", d, kIdentityTol));
    } else {
        checks.push_back(skipped("det-S", "Schwarzschild only"));
    }

    const bool space_form = m.catalog && m.id == "space-form";
    if (space_form && !nonzero.empty()) {
        const double kappa = m.entry.params.at("kappa");
        double d = 0.0;
        for (const auto* s : nonzero) d = std::max(d, space_form_identity_defect(*s, cd.g, kappa));
        checks.push_back(make_check("example2-identities", d, kIdentityTol));
    } else {
        checks.push_back(skipped("example2-identities", space_form ? "no nonzero sigma found" : "space forms only"));
    }

    if (space_form && cd.dim() >= 3 && !nonzero.empty()) {
        double d = 0.0;
        for (const auto* s : nonzero) d = std::max(d, ricci_quadratic_defect(*s, cd));
        checks.push_back(make_check("example3-byproduct", d, kIdentityTol));
    } else {
        checks.push_back(skipped("example3-byproduct", "conformally flat space forms with n >= 3 only"));
    }

    {
        double d = 0.0;
        bool any = false;
        for (const auto& s : sols)
            if (s.q.signs == kAllPlus) {
                d = std::max(d, sigma_form_defect(s, cd));
                any = true;
            }
        if (any) checks.push_back(make_check("sigma-equals-R", d, kIdentityTol));
        else checks.push_back(skipped("sigma-equals-R", "no (+,+,+,+) solutions"));
    }
    return checks;
}

json checks_json(const std::vector<Check>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back(json{{"name", c.name}, {"status", c.status}, {"pass", c.status != "fail"},
                           {"max_defect", c.max_defect}, {"threshold", c.threshold}, {"detail", c.detail}});
    return arr;
}

// ---- rendering ----

std::string scalar_text(const json& v) {
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void text_render(const json& v, const std::string& indent, std::ostream& os) {
    for (const auto& [key, val] : v.items()) {
        if (val.is_object()) {
            os << indent << key << ":\n";
            text_render(val, indent + "  ", os);
        } else if (val.is_array() && !val.empty() && val.front().is_structured()) {
            os << indent << key << ":\n";
            for (std::size_t i = 0; i < val.size(); ++i) {
                os << indent << "  [" << i << "]\n";
                text_render(val[i], indent + "    ", os);
            }
        } else if (val.is_array()) {
            os << indent << key << ":";
            for (const auto& e : val) os << " " << scalar_text(e);
            os << "\n";
        } else {
            os << indent << key << ": " << scalar_text(val) << "\n";
        }
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string join_vec(const json& arr) {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) s += (i ? ";" : "") + scalar_text(arr[i]);
    return s;
}

void csv_render(const json& report, std::ostream& os) {
    if (report.contains("solutions")) {
        os << "sigma,residual,origin,signs,members,distinct_orbits,orbit_size,trivial,label,w,x,y,z\n";
        for (const auto& s : report["solutions"]) {
            os << scalar_text(s["sigma"]) << ',' << scalar_text(s["residual"]) << ','
               << csv_field(s["origin"]) << ',' << csv_field(s["signs"]) << ',' << s.value("members", 1) << ','
               << s.value("distinct_orbits", 1) << ',' << s["orbit_size"].dump() << ','
               << (s["trivial"].get<bool>() ? "true" : "false") << ',' << csv_field(s["label"]) << ','
               << join_vec(s["quadruple"]["w"]) << ',' << join_vec(s["quadruple"]["x"]) << ','
               << join_vec(s["quadruple"]["y"]) << ',' << join_vec(s["quadruple"]["z"]) << '\n';
        }
    } else if (report.contains("checks")) {
        os << "check,status,max_defect,threshold,detail\n";
        for (const auto& c : report["checks"])
            os << csv_field(c["name"]) << ',' << csv_field(c["status"]) << ',' << scalar_text(c["max_defect"])
               << ',' << scalar_text(c["threshold"]) << ',' << csv_field(c["detail"]) << '\n';
    } else if (report.contains("catalog")) {
        os << "id,dimension,description\n";
        for (const auto& e : report["catalog"])
            os << csv_field(e["id"]) << ',' << e["dimension"].dump() << ',' << csv_field(e["description"]) << '\n';
    } else if (report.contains("invariants")) {
        os << "quantity,value\n";
        const json& inv = report["invariants"];
        os << "ricci_scalar," << scalar_text(inv["ricci_scalar"]) << '\n';
        os << "kretschmann," << scalar_text(inv["kretschmann"]) << '\n';
        os << "weyl_contraction," << scalar_text(inv["weyl"]["contraction"]) << '\n';
        if (!inv["np_scalars"].is_null()) {
            for (int k = 0; k < 5; ++k) {
                os << "psi" << k << "_re," << scalar_text(inv["np_scalars"][k]["re"]) << '\n';
                os << "psi" << k << "_im," << scalar_text(inv["np_scalars"][k]["im"]) << '\n';
            }
            os << "invariant_I_re," << scalar_text(inv["invariant_I"]["re"]) << '\n';
            os << "invariant_I_im," << scalar_text(inv["invariant_I"]["im"]) << '\n';
        }
    }
}

void emit(const RunConfig& cfg, const json& report, std::ostream& out) {
    std::ostringstream os;
    if (cfg.output == "json") os << report.dump(2) << '\n';
    else if (cfg.output == "csv") csv_render(report, os);
    else text_render(report, "", os);
    if (cfg.out_path.empty()) {
        out << os.str();
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + cfg.out_path + "'");
    f << os.str();
}

// ---- commands ----

int cmd_catalog_list(const RunConfig& cfg, std::ostream& out) {
    json r = header(cfg);
    json arr = json::array();
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = make_catalog_entry(id, {});
        json p = json::object();
        for (const auto& [k, v] : e.params) p[k] = v;
        arr.push_back(json{{"id", id},
                           {"description", catalog_description(id)},
                           {"dimension", e.spec.dimension},
                           {"signature", e.spec.signature},
                           {"coordinates", e.coordinates},
                           {"default_params", p},
                           {"default_point", vec_json(e.default_point)}});
    }
    r["catalog"] = arr;
    emit(cfg, r, out);
    return kExitOk;
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out) {
    const ResolvedMetric m = resolve(cfg);
    const CurvatureData cd = riemann(m.entry.spec, m.point);
    json r = header(cfg);
    r["config"] = config_json(cfg, m);
    r["curvature_source"] = cd.source == CurvatureSource::Analytic ? "analytic" : "numeric";
    r["invariants"] = invariants_json(invariants(cd, tetrad_for(m)));
    emit(cfg, r, out);
    return kExitOk;
}

int cmd_svp(const RunConfig& cfg, std::ostream& out) {
    const ResolvedMetric m = resolve(cfg);
    const CurvatureData cd = riemann(m.entry.spec, m.point);
    const SolveOutcome o = solve(cfg, m, cd);
    json r = header(cfg);
    r["config"] = config_json(cfg, m);
    r["invariants"] = invariants_json(invariants(cd, tetrad_for(m)));
    r["search"] = {{"method", o.method},
                   {"starts", o.starts},
                   {"converged", o.converged},
                   {"exhaustive", o.exhaustive},
                   {"note", o.method == "multistart" ? "search, not enumeration" : "closed-form reduction"}};
    r["solutions"] = solutions_json(o, cd, cfg.tol);
    r["expected"] = expected_json(m, o);
    emit(cfg, r, out);
    return o.converged == 0 ? kExitNoConvergence : kExitOk;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
    const ResolvedMetric m = resolve(cfg);
    const CurvatureData cd = riemann(m.entry.spec, m.point);
    const SolveOutcome o = solve(cfg, m, cd);
    if (o.solutions.empty()) throw NoConvergence("no solution to build an orbit from");
    const SVPSolution* base = &o.solutions.front();
    for (const auto& s : o.solutions)
        if (std::abs(s.sigma) > std::abs(base->sigma)) base = &s;
    const auto members = orbit(*base, cd, std::max(10.0 * cfg.tol, kOrbitTol));
    json r = header(cfg);
    r["config"] = config_json(cfg, m);
    r["base"] = solution_json(*base);
    json arr = json::array();
    for (const auto& s : members) {
        json j = solution_json(s);
        j["orbit_size"] = members.size();
        arr.push_back(j);
    }
    r["solutions"] = arr;
    emit(cfg, r, out);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const ResolvedMetric m = resolve(cfg);
    const CurvatureData cd = riemann(m.entry.spec, m.point);
    const auto checks = run_checks(cfg, m, cd);
    json r = header(cfg);
    r["config"] = config_json(cfg, m);
    r["checks"] = checks_json(checks);
    const bool ok = std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == "fail"; });
    r["all_pass"] = ok;
    emit(cfg, r, out);
    return ok ? kExitOk : kExitVerification;
}

int exit_code(const Error& e) {
    switch (e.category()) {
        case Error::Category::Config: return kExitConfig;
        case Error::Category::Domain: return kExitDomain;
        case Error::Category::Convergence: return kExitNoConvergence;
        case Error::Category::Verification: return kExitVerification;
    }
    return kExitConfig;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--metric", cfg.metric, "Catalog id or path to a metric file");
    sub->add_option("--params", cfg.params_text, "Parameters k=v[,k=v...]");
    sub->add_option("--point", cfg.point_text, "Evaluation point v[,v...] (radians)");
    sub->add_option("--signs", cfg.signs, "Constraint signs, e.g. ++++, +++- or all");
    sub->add_option("--tol", cfg.tol, "Residual tolerance");
    sub->add_option("--starts", cfg.starts, "Multistart count");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--method", cfg.method, "auto, multistart or reduced");
    sub->add_option("--threads", cfg.threads, "Worker threads for multistart (0: auto)");
    sub->add_option("--output", cfg.output, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out_path, "Write the report to this file");
    sub->add_flag("--deterministic", cfg.deterministic, "Omit the timestamp");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riemann tensor curvature invariants and singular values", "rsv"};
    app.require_subcommand(1);
    RunConfig cfg;
    const std::pair<const char*, const char*> subs[] = {
        {"invariants", "Ricci scalar, Kretschmann, Weyl and Newman-Penrose data"},
        {"svp", "Solve the Riemann singular value problem"},
        {"verify", "Run the property checks at a point"},
        {"orbit", "Solve, then emit the sign/swap/rotation orbit of the largest sigma"},
    };
    for (const auto& [name, desc] : subs) add_common(app.add_subcommand(name, desc), cfg);
    CLI::App* catalog = app.add_subcommand("catalog", "Catalog operations");
    catalog->require_subcommand(1);
    CLI::App* list = catalog->add_subcommand("list", "List catalog metrics");
    list->add_option("--output", cfg.output, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    list->add_option("--out", cfg.out_path, "Write the report to this file");
    list->add_flag("--deterministic", cfg.deterministic, "Omit the timestamp");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (list->parsed()) {
            cfg.command = "catalog list";
            return cmd_catalog_list(cfg, out);
        }
        for (const auto& [name, desc] : subs) {
            if (!app.got_subcommand(name)) continue;
            cfg.command = name;
            const std::string cmd = name;
            if (cmd == "invariants") return cmd_invariants(cfg, out);
            if (cmd == "svp") return cmd_svp(cfg, out);
            if (cmd == "verify") return cmd_verify(cfg, out);
            return cmd_orbit(cfg, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace rsv
