#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsv/catalog.hpp"
#include "rsv/geometry.hpp"

namespace rsv {

// Plain-text metric definition. One directive per line, '#' starts a comment:
//
//   name      my-sphere
//   dimension 2
//   signature + +          (or "++"; defaults to all +)
//   coords    theta phi
//   param     R 1          (default value, overridable from the command line)
//   point     1.0472 0     (optional default evaluation point)
//   g theta theta = R^2
//   g 1 1 = R^2 * sin(theta)^2
//
// Indices are 0-based integers or coordinate names. Missing components are
// zero. An off-diagonal entry given once is mirrored; giving both g i j and
// g j i keeps them as written, so asymmetric input reaches the checks.
struct UserMetric {
    MetricSpec spec;
    std::vector<std::string> coordinates;
    Params params;
    std::optional<Point> default_point;
};

// Throws ConfigError on syntax errors, unknown names, or overrides for
// parameters the file does not declare.
UserMetric parse_metric_text(const std::string& text, const Params& overrides = {},
                             const std::string& source = "<metric>");
UserMetric load_metric_file(const std::string& path, const Params& overrides = {});

}  // namespace rsv
