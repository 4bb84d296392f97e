#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mnewt/sym_matrix.hpp"
#include "mnewt/vec.hpp"

namespace mnewt {

/// An objective bundle: dimension, evaluators, a default start, and (when
/// known analytically) the minimizer.
struct Problem {
    std::string name;
    std::size_t dim = 0;
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad;
    std::function<SymMatrix(const Vec&)> hess;
    Vec x0_default;
    std::optional<std::pair<Vec, double>> known_min;
};

/// Rosenbrock banana, f = 100 (x2 - x1^2)^2 + (1 - x1)^2, started deep in
/// the far branch of the valley.
inline Problem rosenbrock() {
    Problem p;
    p.name = "rosenbr";
    p.dim = 2;
    p.f = [](const Vec& x) {
        const double t = x[1] - x[0] * x[0];
        const double u = 1.0 - x[0];
        return 100.0 * t * t + u * u;
    };
    p.grad = [](const Vec& x) {
        const double t = x[1] - x[0] * x[0];
        return Vec{-400.0 * x[0] * t - 2.0 * (1.0 - x[0]), 200.0 * t};
    };
    p.hess = [](const Vec& x) {
        SymMatrix h(2);
        h.set(0, 0, 1200.0 * x[0] * x[0] - 400.0 * x[1] + 2.0);
        h.set(0, 1, -400.0 * x[0]);
        h.set(1, 1, 200.0);
        return h;
    };
    p.x0_default = {-1.9, 2.0};
    p.known_min = {{Vec{1.0, 1.0}, 0.0}};
    return p;
}

/// The 16x16 symmetric Toeplitz test matrix for the eigensolver; entry (i,j)
/// is r[|i-j|] with the autocorrelation-style constants below.
inline SymMatrix toeplitz_rayleigh() {
    static const double r[16] = {
        1.00000000,  0.91189350,  0.75982820,  0.59792770,
        0.41953610,  0.27267350,  0.13446390,  0.00821722,
        -0.09794101, -0.21197350, -0.30446960, -0.34471370,
        -0.34736840, -0.32881280, -0.29269750, -0.24512650,
    };
    SymMatrix m(16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = i; j < 16; ++j) m.set(i, j, r[j - i]);
    return m;
}

/// Strongly convex quadratic f = 1/2 x'Ax - b'x with the minimizer solved at
/// construction; rejects non-positive-definite A.
inline Problem quadratic(const SymMatrix& a, const Vec& b) {
    if (b.size() != a.size()) throw std::invalid_argument("quadratic: dimension mismatch");
    const auto factor = cholesky_factor(a);
    if (!factor) throw std::invalid_argument("quadratic: matrix is not positive definite");
    const Vec xstar = cholesky_solve(*factor, b);

    Problem p;
    p.name = "quadratic";
    p.dim = a.size();
    p.f = [a, b](const Vec& x) { return 0.5 * quadratic_form(a, x) - dot(b, x); };
    p.grad = [a, b](const Vec& x) { return matvec(a, x) - b; };
    p.hess = [a](const Vec&) { return a; };
    p.x0_default = Vec(a.size(), 0.0);
    p.known_min = {{xstar, 0.5 * quadratic_form(a, xstar) - dot(b, xstar)}};
    return p;
}

inline Problem beale() {
    Problem p;
    p.name = "beale";
    p.dim = 2;
    // residuals e_i = c_i - x1 (1 - x2^i), c = (1.5, 2.25, 2.625)
    auto residuals = [](const Vec& x, double e[3], double de1[3], double de2[3]) {
        const double c[3] = {1.5, 2.25, 2.625};
        double pow_x2 = 1.0;  // x2^i
        for (int i = 0; i < 3; ++i) {
            const double prev = pow_x2;  // x2^i before increment
            pow_x2 *= x[1];
            e[i] = c[i] - x[0] * (1.0 - pow_x2);
            de1[i] = -(1.0 - pow_x2);
            de2[i] = x[0] * static_cast<double>(i + 1) * prev;
        }
    };
    p.f = [residuals](const Vec& x) {
        double e[3], d1[3], d2[3];
        residuals(x, e, d1, d2);
        return e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    };
    p.grad = [residuals](const Vec& x) {
        double e[3], d1[3], d2[3];
        residuals(x, e, d1, d2);
        Vec g(2, 0.0);
        for (int i = 0; i < 3; ++i) {
            g[0] += 2.0 * e[i] * d1[i];
            g[1] += 2.0 * e[i] * d2[i];
        }
        return g;
    };
    p.hess = [residuals](const Vec& x) {
        double e[3], d1[3], d2[3];
        residuals(x, e, d1, d2);
        // second partials of e_i: d2e/dx1dx2 = i x2^(i-1), d2e/dx2^2 = i(i-1) x1 x2^(i-2)
        const double e12[3] = {1.0, 2.0 * x[1], 3.0 * x[1] * x[1]};
        const double e22[3] = {0.0, 2.0 * x[0], 6.0 * x[0] * x[1]};
        double h11 = 0.0, h12 = 0.0, h22 = 0.0;
        for (int i = 0; i < 3; ++i) {
            h11 += 2.0 * d1[i] * d1[i];
            h12 += 2.0 * (d1[i] * d2[i] + e[i] * e12[i]);
            h22 += 2.0 * (d2[i] * d2[i] + e[i] * e22[i]);
        }
        SymMatrix h(2);
        h.set(0, 0, h11);
        h.set(0, 1, h12);
        h.set(1, 1, h22);
        return h;
    };
    p.x0_default = {1.0, 1.0};
    p.known_min = {{Vec{3.0, 0.5}, 0.0}};
    return p;
}

inline Problem cube() {
    Problem p;
    p.name = "cube";
    p.dim = 2;
    p.f = [](const Vec& x) {
        const double t = x[1] - x[0] * x[0] * x[0];
        const double u = 1.0 - x[0];
        return 100.0 * t * t + u * u;
    };
    p.grad = [](const Vec& x) {
        const double t = x[1] - x[0] * x[0] * x[0];
        return Vec{-600.0 * x[0] * x[0] * t - 2.0 * (1.0 - x[0]), 200.0 * t};
    };
    p.hess = [](const Vec& x) {
        const double t = x[1] - x[0] * x[0] * x[0];
        SymMatrix h(2);
        h.set(0, 0, -1200.0 * x[0] * t + 1800.0 * std::pow(x[0], 4) + 2.0);
        h.set(0, 1, -600.0 * x[0] * x[0]);
        h.set(1, 1, 200.0);
        return h;
    };
    p.x0_default = {-1.2, 1.0};
    p.known_min = {{Vec{1.0, 1.0}, 0.0}};
    return p;
}

inline Problem sisser() {
    Problem p;
    p.name = "sisser";
    p.dim = 2;
    p.f = [](const Vec& x) {
        return 3.0 * std::pow(x[0], 4) - 2.0 * x[0] * x[0] * x[1] * x[1] +
               3.0 * std::pow(x[1], 4);
    };
    p.grad = [](const Vec& x) {
        return Vec{12.0 * std::pow(x[0], 3) - 4.0 * x[0] * x[1] * x[1],
                   -4.0 * x[0] * x[0] * x[1] + 12.0 * std::pow(x[1], 3)};
    };
    p.hess = [](const Vec& x) {
        SymMatrix h(2);
        h.set(0, 0, 36.0 * x[0] * x[0] - 4.0 * x[1] * x[1]);
        h.set(0, 1, -8.0 * x[0] * x[1]);
        h.set(1, 1, -4.0 * x[0] * x[0] + 36.0 * x[1] * x[1]);
        return h;
    };
    p.x0_default = {1.0, 0.1};
    p.known_min = {{Vec{0.0, 0.0}, 0.0}};
    return p;
}

/// Rosenbrock with the first gradient entry scaled by 1.01: a checker fixture
/// whose derivative test must fail. Excluded from the bench suite.
inline Problem badgrad_fixture() {
    Problem p = rosenbrock();
    p.name = "badgrad";
    p.known_min.reset();
    auto good = p.grad;
    p.grad = [good](const Vec& x) {
        Vec g = good(x);
        g[0] *= 1.01;
        return g;
    };
    return p;
}

/// The shipped benchmark suite: every member carries analytic derivatives
/// validated by the finite-difference checker.
inline std::vector<Problem> standard_set() {
    std::vector<Problem> s;
    s.push_back(beale());
    s.push_back(cube());
    s.push_back(quadratic(SymMatrix::diagonal({1.0, 2.0}), {1.0, 2.0}));
    s.back().x0_default = {5.0, 5.0};
    s.push_back(rosenbrock());
    s.push_back(sisser());
    return s;
}

/// Name lookup across the suite plus test-only fixtures.
inline std::optional<Problem> find_problem(const std::string& name) {
    for (auto& p : standard_set())
        if (p.name == name) return p;
    if (name == "badgrad") return badgrad_fixture();
    return std::nullopt;
}

/// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: h must be positive");
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double fp = f(xp);
        const double fm = f(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::runtime_error("fd_gradient: non-finite value on the stencil");
        g[i] = (fp - fm) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

struct DerivativeReport {
    double grad_rel_err = 0.0;
    double hess_rel_err = 0.0;
    bool grad_ok = false;
    bool hess_ok = false;
    bool ok() const { return grad_ok && hess_ok; }
};

/// Max-norm relative deviation of the analytic gradient from central
/// differences of f, and of the analytic Hessian from central differences of
/// the analytic gradient. Pass thresholds: 1e-6 (gradient), 1e-4 (Hessian).
inline DerivativeReport check_derivatives(const Problem& p, const Vec& x) {
    const double h = 1e-6 * (1.0 + norm_inf(x));

    DerivativeReport rep;
    const Vec ga = p.grad(x);
    const Vec gf = fd_gradient(p.f, x, h);
    rep.grad_rel_err = norm_inf(ga - gf) / (1.0 + norm_inf(ga));
    rep.grad_ok = rep.grad_rel_err < 1e-6;

    const SymMatrix ha = p.hess(x);
    double max_dev = 0.0, max_h = 0.0;
    Vec xp = x, xm = x;
    for (std::size_t j = 0; j < p.dim; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Vec gp = p.grad(xp);
        const Vec gm = p.grad(xm);
        for (std::size_t i = 0; i < p.dim; ++i) {
            const double fd = (gp[i] - gm[i]) / (2.0 * h);
            max_dev = std::max(max_dev, std::abs(ha(i, j) - fd));
            max_h = std::max(max_h, std::abs(ha(i, j)));
        }
        xp[j] = x[j];
        xm[j] = x[j];
    }
    rep.hess_rel_err = max_dev / (1.0 + max_h);
    rep.hess_ok = rep.hess_rel_err < 1e-4;
    return rep;
}

/// Deterministic probe points around x0 for derivative checks: a tiny
/// linear-congruential stream, so results do not depend on the standard
/// library's distribution internals.
inline std::vector<Vec> check_points(const Problem& p, std::size_t count = 5) {
    std::vector<Vec> pts;
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next01 = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;  // [0,1)
    };
    const double scale = 1.0 + norm_inf(p.x0_default);
    for (std::size_t k = 0; k < count; ++k) {
        Vec x(p.dim);
        for (std::size_t i = 0; i < p.dim; ++i)
            x[i] = p.x0_default[i] + scale * (next01() - 0.5);
        pts.push_back(std::move(x));
    }
    return pts;
}

}  // namespace mnewt
