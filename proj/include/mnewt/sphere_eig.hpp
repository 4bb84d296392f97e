#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mnewt/sym_matrix.hpp"
#include "mnewt/vec.hpp"

namespace mnewt {

enum class Extreme { Max, Min };
enum class EigMethod { SphereCG, JacobiFallback };

inline const char* to_string(EigMethod m) {
    return m == EigMethod::SphereCG ? "sphere_cg" : "jacobi_fallback";
}

struct EigConfig {
    Extreme which = Extreme::Min;
    double tol = 1e-8;          // residual tolerance, scale-aware (see cg_extreme_eig)
    std::size_t max_iter = 100;
};

/// One iterate of the sphere CG: unit point, Rayleigh quotient, sphere
/// gradient G = (H - rho I) x, and the conjugate direction Q in the tangent
/// space at x.
struct RayleighState {
    Vec x;
    double rho = 0.0;
    Vec G;
    Vec Q;
};

struct EigEstimate {
    double value = 0.0;
    Vec vector;
    std::size_t iterations = 0;
    bool converged = false;
    EigMethod method = EigMethod::SphereCG;
};

inline double rayleigh(const SymMatrix& h, const Vec& x) {
    if (x.size() != h.size()) throw std::invalid_argument("rayleigh: dimension mismatch");
    if (std::abs(norm2(x) - 1.0) > 1e-10)
        throw std::invalid_argument("rayleigh: x must be a unit vector");
    return quadratic_form(h, x);
}

/// Closed-form extremizer of rho(x c + q s) on the great circle spanned by x
/// and q, with a = 2 x'Hq and b = x'Hx - q'Hq. The critical points satisfy
/// cos2t = +-b/r, sin2t = +-a/r (plus sign for Max, minus for Min); the
/// half-angle recovery takes the larger of |c|, |s| through the square root.
/// Returned with c >= 0; (c,s) and (-c,-s) describe the same axis.
inline std::pair<double, double> geodesic_coeffs(double a, double b, Extreme which) {
    const double r = std::hypot(a, b);
    if (r <= 1e-300) throw std::domain_error("geodesic_coeffs: degenerate step (a = b = 0)");
    const double sgn = (which == Extreme::Max) ? 1.0 : -1.0;
    const double c2 = sgn * b / r;  // cos(2t)
    const double s2 = sgn * a / r;  // sin(2t)
    double c, s;
    if (c2 >= 0.0) {
        c = std::sqrt(0.5 * (1.0 + c2));
        s = s2 / (2.0 * c);
    } else {
        s = std::sqrt(0.5 * (1.0 - c2));
        c = s2 / (2.0 * s);
    }
    // Keep the variant of the critical point matching `which`; rounding at the
    // branch boundary could otherwise hand back the opposite extremum.
    const double v_plus = b * (c * c - s * s) + 2.0 * a * c * s;
    const double v_minus = b * (c * c - s * s) - 2.0 * a * c * s;
    if (sgn * v_minus > sgn * v_plus) s = -s;
    if (c < 0.0) {
        c = -c;
        s = -s;
    }
    return {c, s};
}

/// Parallel transport of v along the geodesic leaving x in unit tangent
/// direction q by the angle with cos t = c, sin t = s:
///   tau v = v - (v'q) (x s + q (1 - c)).
inline Vec transport(const Vec& v, const Vec& x, const Vec& q, double c, double s) {
    if (v.size() != x.size() || x.size() != q.size())
        throw std::invalid_argument("transport: dimension mismatch");
    if (std::abs(norm2(x) - 1.0) > 1e-10 || std::abs(norm2(q) - 1.0) > 1e-10)
        throw std::invalid_argument("transport: x and q must be unit vectors");
    if (std::abs(dot(x, q)) > 1e-10)
        throw std::invalid_argument("transport: q must be tangent at x");
    if (std::abs(c * c + s * s - 1.0) > 1e-10)
        throw std::invalid_argument("transport: (c, s) must lie on the unit circle");
    const double vq = dot(v, q);
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - vq * (x[i] * s + q[i] * (1.0 - c));
    return r;
}

/// Conjugate gradient on the unit sphere for one extreme eigenvalue of h.
///
/// Follows the geodesic-step CG with three stabilizations: the iterate is
/// renormalized every step, the conjugate direction is projected back onto
/// the tangent space, and Q restarts from the projected gradient every n
/// iterations. Stops when ||G|| <= tol * (1 + |rho|); a start that already
/// satisfies this returns converged with 0 iterations. A run that exhausts
/// max_iter comes back with converged = false and the caller escalates to
/// the dense fallback.
inline EigEstimate cg_extreme_eig(const SymMatrix& h, const Vec& x0, const EigConfig& cfg,
                                  std::vector<RayleighState>* trace = nullptr) {
    const std::size_t n = h.size();
    if (x0.size() != n) throw std::invalid_argument("cg_extreme_eig: dimension mismatch");
    if (std::abs(norm2(x0) - 1.0) > 1e-10)
        throw std::invalid_argument("cg_extreme_eig: x0 must be a unit vector");
    if (cfg.max_iter < 1) throw std::invalid_argument("cg_extreme_eig: max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("cg_extreme_eig: tol must be positive");

    Vec x = normalized(x0);
    Vec hx = matvec(h, x);
    double rho = dot(x, hx);
    Vec g = hx - rho * x;

    // two projection passes: one leaves a residual scaled by the
    // pre-cancellation norm, which breaks tangency once Q is numerically zero
    auto project = [](const Vec& v, const Vec& at) {
        Vec r = v - dot(at, v) * at;
        return r - dot(at, r) * at;
    };
    Vec q_dir = project(g, x);  // Q; tangent from the start
    auto small = [&](double gn, double r) { return gn <= cfg.tol * (1.0 + std::abs(r)); };
    auto record = [&]() {
        if (trace) trace->push_back({x, rho, g, q_dir});
    };

    record();
    if (small(norm2(g), rho)) return {rho, x, 0, true, EigMethod::SphereCG};

    std::size_t done = 0;
    for (std::size_t k = 0; k < cfg.max_iter; ++k, done = k) {
        double qn = norm2(q_dir);
        if (qn <= 1e-300) {
            q_dir = project(g, x);
            qn = norm2(q_dir);
            if (qn <= 1e-300) break;  // direction gone; the final test decides
        }
        const Vec q = (1.0 / qn) * q_dir;
        const Vec hq = matvec(h, q);
        const double a = 2.0 * dot(x, hq);
        const double b = rho - dot(q, hq);
        if (std::hypot(a, b) <= 1e-300) break;  // rho constant on this circle

        const auto [c, s] = geodesic_coeffs(a, b, cfg.which);

        Vec xn(n);
        for (std::size_t i = 0; i < n; ++i) xn[i] = c * x[i] + s * q[i];
        xn = normalized(xn);

        Vec tau_q(n), tau_g(n);
        const double qg = dot(q, g);
        for (std::size_t i = 0; i < n; ++i) {
            tau_q[i] = c * q_dir[i] - qn * s * x[i];
            tau_g[i] = g[i] - qg * (x[i] * s + q[i] * (1.0 - c));
        }

        const Vec hxn = matvec(h, xn);
        const double rhon = dot(xn, hxn);
        Vec gn = hxn - rhon * xn;

        const double denom = dot(g, q_dir);
        Vec q_next;
        if (std::abs(denom) <= 1e-300) {
            q_next = project(gn, xn);
        } else {
            const double mu = dot(gn - tau_g, gn) / denom;
            q_next = project(gn + mu * tau_q, xn);
        }
        if (k % n == n - 1) q_next = project(gn, xn);  // periodic restart

        x = std::move(xn);
        rho = rhon;
        g = std::move(gn);
        q_dir = std::move(q_next);

        record();
        if (small(norm2(g), rho)) return {rho, x, k + 1, true, EigMethod::SphereCG};
    }
    return {rho, x, done, small(norm2(g), rho), EigMethod::SphereCG};
}

/// The all-ones direction with the last entry nudged, so symmetric matrices
/// whose eigenvectors align with ones-like directions do not start exactly on
/// a stationary point.
inline Vec default_eig_start(std::size_t n) {
    Vec v(n, 1.0);
    v[n - 1] = 1.0 + 1e-3;
    return normalized(v);
}

struct ExtremePair {
    EigEstimate lo;
    EigEstimate hi;
};

/// Both extreme eigenvalues via the sphere CG, with the dense Jacobi solver
/// as a total fallback: if either run fails to converge (or they cross,
/// which only a misconverged run can produce) both ends are recomputed
/// densely and marked JacobiFallback.
inline ExtremePair extreme_pair(const SymMatrix& h, double tol, std::size_t max_iter,
                                const Vec* warm_lo = nullptr, const Vec* warm_hi = nullptr) {
    const Vec start = default_eig_start(h.size());
    const Vec lo0 = warm_lo ? normalized(*warm_lo) : start;
    const Vec hi0 = warm_hi ? normalized(*warm_hi) : start;

    EigEstimate lo = cg_extreme_eig(h, lo0, {Extreme::Min, tol, max_iter});
    EigEstimate hi = cg_extreme_eig(h, hi0, {Extreme::Max, tol, max_iter});

    if (!lo.converged || !hi.converged || lo.value > hi.value) {
        const EigDecomp eg = jacobi_eigs(h);
        const std::size_t sweeps = static_cast<std::size_t>(eg.sweeps);
        lo = {eg.values.front(), eg.vectors.front(), sweeps, true, EigMethod::JacobiFallback};
        hi = {eg.values.back(), eg.vectors.back(), sweeps, true, EigMethod::JacobiFallback};
    }
    return {lo, hi};
}

}  // namespace mnewt
