#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rsv/algebra.hpp"
#include "rsv/geometry.hpp"

namespace rsv {

using Params = std::map<std::string, double>;

struct CatalogEntry {
    MetricSpec spec;
    Params params;
    std::vector<std::string> coordinates;
    Point default_point;
    std::function<bool(const Point&)> admissible;
    // Draws a random admissible point; used by property suites.
    std::function<Point(std::mt19937_64&)> sample;
    std::function<NPTetrad(const Point&)> tetrad;  // optional
    // Singular values the catalog predicts at a point (0 always included).
    std::function<std::vector<double>(const Point&)> expected_sigma;  // optional
};

// ds^2 = dtheta^2 + sin^2(theta) dphi^2, coordinates (theta, phi).
CatalogEntry sphere2();

// Constant sectional curvature kappa in dimension n. The chart is
// g = delta / (1 + kappa |x|^2 / 4)^2, equal to the identity at the origin;
// the curvature is supplied algebraically as R_{ijkl} = kappa (g_ik g_jl - g_il g_jk).
// For kappa < 0 the chart covers |x| < 2 / sqrt(-kappa).
CatalogEntry space_form(double kappa, int n);

// Coordinates (t, r, theta, phi), signature (-,+,+,+), exterior r > 2M.
CatalogEntry schwarzschild(double M);

// Boyer-Lindquist (t, r, theta, phi); curvature is computed numerically.
CatalogEntry kerr(double M, double a);

CatalogEntry euclidean(int n);
CatalogEntry minkowski();

// Schwarzschild curvature coefficients at (r, theta).
struct SchwarzschildCoefficients {
    double A, B, C, D;
};
SchwarzschildCoefficients schwarzschild_coefficients(double M, double r, double theta);

// Kinnersley tetrad on Kerr in Boyer-Lindquist components.
NPTetrad kerr_tetrad(double M, double a, double r, double theta);

// M / (r - i a cos(theta))^3
Complex kerr_psi2(double M, double a, double r, double theta);

// Stable ids: sphere2, space-form, euclidean, minkowski, schwarzschild, kerr.
const std::vector<std::string>& catalog_ids();
std::string catalog_description(const std::string& id);

// Builds an entry from its id and parameters (M, a, kappa, n). Missing
// parameters take defaults (M = 1, a = 0.5, kappa = 1, n = 4 / 3). Throws
// ConfigError for unknown ids or invalid parameters.
CatalogEntry make_catalog_entry(const std::string& id, const Params& params);

}  // namespace rsv
