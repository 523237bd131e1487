#include "rsv/finite_diff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsv/errors.hpp"

namespace rsv {
namespace {

using Stencil = std::function<Eigen::VectorXd(double scale)>;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Richardson on an O(h^2) stencil. The extrapolated values at h and 2h differ by
// roughly 15x the error of the one at h, which gives the estimate.
FdResult richardson(const Stencil& stencil, double h, double fscale, const FdOptions& opts,
                    const char* what) {
    FdResult best;
    best.error_estimate = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt <= opts.max_refinements; ++attempt) {
        const Eigen::VectorXd d2h = stencil(2.0 * h);
        const Eigen::VectorXd dh = stencil(h);
        const Eigen::VectorXd dh2 = stencil(0.5 * h);
        if (all_finite(d2h) && all_finite(dh) && all_finite(dh2)) {
            const Eigen::VectorXd coarse = (4.0 * dh - d2h) / 3.0;
            const Eigen::VectorXd fine = (4.0 * dh2 - dh) / 3.0;
            const double err = (fine - coarse).lpNorm<Eigen::Infinity>() / 15.0;
            if (err < best.error_estimate) {
                best.value = fine;
                best.error_estimate = err;
                best.step = h;
            }
            const double scale = std::max({fscale, fine.lpNorm<Eigen::Infinity>(), 1e-300});
            if (err <= opts.rel_tol * scale) return best;
        }
        h *= 0.25;
    }
    if (best.value.size() == 0)
        throw DifferentiationFailure(std::string(what) + ": non-finite values at every step");
    const double scale = std::max(fscale, best.value.lpNorm<Eigen::Infinity>());
    if (best.error_estimate > opts.fail_tol * std::max(scale, 1e-300))
        throw DifferentiationFailure(std::string(what) + ": error estimate " +
                                     std::to_string(best.error_estimate) +
                                     " above tolerance");
    return best;
}

double step_for(const Eigen::VectorXd& p, int i, const FdOptions& opts) {
    return opts.base_step * std::max(1.0, std::abs(p[i]));
}

}  // namespace

FdResult first_derivative(const VectorField& f, const Eigen::VectorXd& p, int i,
                          const FdOptions& opts) {
    const double fscale = f(p).lpNorm<Eigen::Infinity>();
    const double h0 = step_for(p, i, opts);
    Stencil stencil = [&](double h) {
        Eigen::VectorXd plus = p, minus = p;
        plus[i] += h;
        minus[i] -= h;
        return Eigen::VectorXd((f(plus) - f(minus)) / (2.0 * h));
    };
    return richardson(stencil, h0, fscale, opts, "first derivative");
}

FdResult second_derivative(const VectorField& f, const Eigen::VectorXd& p, int i, int j,
                           const FdOptions& opts) {
    const Eigen::VectorXd f0 = f(p);
    const double fscale = f0.lpNorm<Eigen::Infinity>();
    const double hi0 = step_for(p, i, opts);
    const double hj0 = step_for(p, j, opts);
    Stencil stencil;
    if (i == j) {
        stencil = [&](double s) {
            const double h = s * hi0;
            Eigen::VectorXd plus = p, minus = p;
            plus[i] += h;
            minus[i] -= h;
            return Eigen::VectorXd((f(plus) - 2.0 * f0 + f(minus)) / (h * h));
        };
    } else {
        stencil = [&](double s) {
            const double hi = s * hi0, hj = s * hj0;
            auto at = [&](double si, double sj) {
                Eigen::VectorXd q = p;
                q[i] += si * hi;
                q[j] += sj * hj;
                return f(q);
            };
            return Eigen::VectorXd((at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) /
                                   (4.0 * hi * hj));
        };
    }
    FdResult r = richardson(stencil, 1.0, fscale, opts, "second derivative");
    r.step *= hi0;
    return r;
}

}  // namespace rsv
