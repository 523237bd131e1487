#include "rsv/metric_file.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "rsv/errors.hpp"
#include "rsv/expr.hpp"

namespace rsv {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_number(const std::string& tok, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size()) throw ConfigError(where + ": '" + tok + "' is not a number");
    return v;
}

}  // namespace

UserMetric parse_metric_text(const std::string& text, const Params& overrides,
                             const std::string& source) {
    UserMetric out;
    out.spec.id = "user";
    int dim = 0;
    std::vector<std::pair<std::string, double>> params;  // declaration order
    std::vector<std::tuple<std::string, std::string, std::string, std::string>> comps;  // i, j, expr, where

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "g") {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(where + ": expected 'g i j = expression'");
            std::istringstream idx(line.substr(1, eq - 1));
            std::string i, j, extra;
            if (!(idx >> i >> j) || (idx >> extra))
                throw ConfigError(where + ": expected two indices before '='");
            const std::string expr = trim(line.substr(eq + 1));
            if (expr.empty()) throw ConfigError(where + ": empty expression");
            comps.emplace_back(i, j, expr, where);
            continue;
        }
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (key == "name") {
            if (toks.size() != 1) throw ConfigError(where + ": expected 'name <id>'");
            out.spec.id = toks[0];
        } else if (key == "dimension") {
            if (toks.size() != 1) throw ConfigError(where + ": expected 'dimension N'");
            const double d = parse_number(toks[0], where);
            if (d != static_cast<int>(d) || d < 2 || d > 8)
                throw ConfigError(where + ": dimension must be an integer in [2, 8]");
            dim = static_cast<int>(d);
        } else if (key == "signature") {
            std::string joined;
            for (const auto& t : toks) joined += t;
            out.spec.signature.clear();
            for (char c : joined) {
                if (c == '+') out.spec.signature.push_back(1);
                else if (c == '-') out.spec.signature.push_back(-1);
                else throw ConfigError(where + ": signature uses only '+' and '-'");
            }
        } else if (key == "coords") {
            out.coordinates = toks;
        } else if (key == "param") {
            if (toks.size() != 2) throw ConfigError(where + ": expected 'param NAME VALUE'");
            params.emplace_back(toks[0], parse_number(toks[1], where));
        } else if (key == "point") {
            Point p(static_cast<Eigen::Index>(toks.size()));
            for (std::size_t k = 0; k < toks.size(); ++k) p[k] = parse_number(toks[k], where);
            out.default_point = p;
        } else {
            throw ConfigError(where + ": unknown directive '" + key + "'");
        }
    }

    if (dim == 0) throw ConfigError(source + ": missing 'dimension'");
    if (out.spec.signature.empty()) out.spec.signature.assign(dim, 1);
    if (static_cast<int>(out.spec.signature.size()) != dim)
        throw ConfigError(source + ": signature length does not match dimension");
    if (out.coordinates.empty())
        for (int k = 0; k < dim; ++k) out.coordinates.push_back("x" + std::to_string(k));
    if (static_cast<int>(out.coordinates.size()) != dim)
        throw ConfigError(source + ": coords count does not match dimension");
    if (out.default_point && out.default_point->size() != dim)
        throw ConfigError(source + ": point length does not match dimension");

    for (const auto& [name, value] : params) out.params[name] = value;
    for (const auto& [name, value] : overrides) {
        if (!out.params.count(name))
            throw ConfigError(source + ": parameter '" + name + "' is not declared in the file");
        out.params[name] = value;
    }

    // Evaluation array: coordinates first, then parameters.
    std::vector<std::string> names = out.coordinates;
    std::vector<double> param_values;
    for (const auto& [name, value] : params) {
        names.push_back(name);
        param_values.push_back(out.params.at(name));
    }

    auto index_of = [&](const std::string& tok, const std::string& where) {
        for (int k = 0; k < dim; ++k)
            if (out.coordinates[k] == tok) return k;
        const double v = parse_number(tok, where);
        if (v != static_cast<int>(v) || v < 0 || v >= dim)
            throw ConfigError(where + ": index '" + tok + "' out of range");
        return static_cast<int>(v);
    };

    std::map<std::pair<int, int>, Expression> entries;
    for (const auto& [si, sj, expr, where] : comps) {
        const int i = index_of(si, where), j = index_of(sj, where);
        if (entries.count({i, j})) throw ConfigError(where + ": component g " + si + " " + sj + " given twice");
        entries.emplace(std::make_pair(i, j), Expression::parse(expr, names));
    }
    std::vector<std::tuple<int, int, Expression>> table;
    for (const auto& [ij, e] : entries) {
        table.emplace_back(ij.first, ij.second, e);
        if (ij.first != ij.second && !entries.count({ij.second, ij.first}))
            table.emplace_back(ij.second, ij.first, e);
    }

    out.spec.dimension = dim;
    out.spec.metric = [dim, table, param_values](const Point& p) {
        std::vector<double> vals(p.data(), p.data() + p.size());
        vals.insert(vals.end(), param_values.begin(), param_values.end());
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& [i, j, e] : table) g(i, j) = e(vals);
        return g;
    };
    return out;
}

UserMetric load_metric_file(const std::string& path, const Params& overrides) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open metric file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_metric_text(ss.str(), overrides, path);
}

}  // namespace rsv
