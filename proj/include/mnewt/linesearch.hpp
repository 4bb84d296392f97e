#pragma once

#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mnewt {

struct WolfeParams {
    double sigma1 = 1e-4;        // sufficient-decrease coefficient
    double sigma2 = 0.9;         // curvature coefficient
    double alpha0 = 1.0;         // first trial; 1 keeps Newton steps intact
    std::size_t max_trials = 60;

    void validate() const {
        if (!(0.0 < sigma1 && sigma1 < sigma2 && sigma2 < 1.0))
            throw std::invalid_argument("WolfeParams: need 0 < sigma1 < sigma2 < 1");
        if (!(alpha0 > 0.0)) throw std::invalid_argument("WolfeParams: alpha0 must be positive");
        if (max_trials < 1) throw std::invalid_argument("WolfeParams: max_trials must be >= 1");
    }
};

enum class LineSearchStatus { WolfeSatisfied, MaxTrialsBestDecrease };

struct LineSearchResult {
    double alpha = 0.0;
    double f_new = 0.0;
    int evals = 0;  // phi and dphi calls combined
    LineSearchStatus status = LineSearchStatus::MaxTrialsBestDecrease;
};

namespace detail {

/// Minimizer of the cubic Hermite interpolant through (a1,f1,g1), (a2,f2,g2).
/// NaN when the cubic has no interior minimizer.
inline double cubic_minimizer(double a1, double f1, double g1, double a2, double f2, double g2) {
    const double d1 = g1 + g2 - 3.0 * (f1 - f2) / (a1 - a2);
    const double disc = d1 * d1 - g1 * g2;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), a2 - a1);
    return a2 - (a2 - a1) * (g2 + d2 - d1) / (g2 - g1 + 2.0 * d2);
}

}  // namespace detail

/// Weak Wolfe line search on phi(alpha) = f(x + alpha d), in the standard
/// bracket-zoom pattern: grow alpha until the sufficient-decrease test fails
/// (or phi turns non-finite, treated as a too-long step), then shrink the
/// bracket by cubic interpolation with a bisection safeguard. Each finite
/// trial evaluates both phi and dphi, so evals <= 2 * max_trials + 2.
///
/// If max_trials runs out the lowest finite phi seen is returned with status
/// MaxTrialsBestDecrease; the caller decides whether that step is usable.
inline LineSearchResult wolfe_search(const std::function<double(double)>& phi,
                                     const std::function<double(double)>& dphi,
                                     const WolfeParams& p) {
    p.validate();
    int evals = 0;

    const double phi0 = phi(0.0);
    ++evals;
    if (!std::isfinite(phi0)) throw std::invalid_argument("wolfe_search: phi(0) is not finite");
    const double dphi0 = dphi(0.0);
    ++evals;
    if (!(dphi0 < 0.0)) throw std::invalid_argument("wolfe_search: not a descent direction");

    double a_lo = 0.0, f_lo = phi0, g_lo = dphi0;
    double a_hi = std::numeric_limits<double>::infinity();
    double f_hi = 0.0, g_hi = 0.0;
    bool hi_has_data = false;

    double alpha = p.alpha0;
    double last_alpha = alpha;
    double best_alpha = 0.0;
    double best_f = std::numeric_limits<double>::infinity();

    for (std::size_t trial = 0; trial < p.max_trials; ++trial) {
        last_alpha = alpha;
        const double fa = phi(alpha);
        ++evals;

        if (!std::isfinite(fa)) {
            a_hi = alpha;  // too long; shrink without data at this end
            hi_has_data = false;
            alpha = 0.5 * (a_lo + a_hi);
            continue;
        }
        if (fa < best_f) {
            best_f = fa;
            best_alpha = alpha;
        }
        const double ga = dphi(alpha);
        ++evals;

        if (fa <= phi0 + p.sigma1 * alpha * dphi0) {
            if (ga >= p.sigma2 * dphi0) {
                assert(fa <= phi0 + p.sigma1 * alpha * dphi0 && ga >= p.sigma2 * dphi0);
                return {alpha, fa, evals, LineSearchStatus::WolfeSatisfied};
            }
            a_lo = alpha;  // decrease fine, curvature says too short
            f_lo = fa;
            g_lo = ga;
        } else {
            a_hi = alpha;  // sufficient decrease failed: too long
            f_hi = fa;
            g_hi = ga;
            hi_has_data = true;
        }

        if (std::isfinite(a_hi)) {
            const double width = a_hi - a_lo;
            double next = std::numeric_limits<double>::quiet_NaN();
            if (hi_has_data)
                next = detail::cubic_minimizer(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi);
            if (!std::isfinite(next) || next < a_lo + 0.1 * width || next > a_hi - 0.1 * width)
                next = a_lo + 0.5 * width;
            alpha = next;
        } else {
            alpha = 2.0 * alpha;
        }
    }

    if (!std::isfinite(best_f)) return {last_alpha, phi0, evals, LineSearchStatus::MaxTrialsBestDecrease};
    return {best_alpha, best_f, evals, LineSearchStatus::MaxTrialsBestDecrease};
}

}  // namespace mnewt
