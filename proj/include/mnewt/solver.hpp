#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mnewt/direction.hpp"
#include "mnewt/linesearch.hpp"
#include "mnewt/problems.hpp"
#include "mnewt/sphere_eig.hpp"
#include "mnewt/sym_matrix.hpp"
#include "mnewt/vec.hpp"

namespace mnewt {

enum class NormRule { Euclid, Inf };
enum class SolveStatus { Converged, MaxIterations, LineSearchStalled };

inline const char* to_string(NormRule n) {
    return n == NormRule::Euclid ? "euclid" : "inf";
}

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max_iterations";
        case SolveStatus::LineSearchStalled: return "linesearch_stalled";
    }
    return "unknown";
}

struct SolverConfig {
    double eps = 1e-5;           // gradient tolerance under norm_rule
    GammaParams gamma_params{};  // delta = 1e-8, cap = 1e12
    WolfeParams wolfe{};
    double eig_tol = 1e-8;       // sphere-CG residual tolerance
    std::size_t eig_max_iter = 0;  // 0 = 10 * dim before the dense fallback
    std::size_t max_iter = 100000;
    NormRule norm_rule = NormRule::Euclid;

    void validate() const {
        if (!(eps > 0.0)) throw std::invalid_argument("SolverConfig: eps must be positive");
        if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
        if (!(eig_tol > 0.0)) throw std::invalid_argument("SolverConfig: eig_tol must be positive");
        gamma_params.validate();
        wolfe.validate();
    }
};

/// One outer iteration of the solve. alpha == 0 marks an iteration where no
/// acceptable step existed and the iterate did not move.
struct IterRecord {
    std::size_t k = 0;
    double f = 0.0;
    double grad_norm = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double cos_theta = 0.0;
    double eig_lo = 0.0;
    double eig_hi = 0.0;
    bool fallback_used = false;
    GammaCase gamma_case = GammaCase::Zero;
    int rung = 1;
    Vec x;  // iterate the step started from
    Vec d;  // search direction
};

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterations;
    Vec x_final;
    double f_final = 0.0;
    double grad_norm_final = 0.0;
    std::size_t iterations = 0;
    std::vector<IterRecord> trace;
};

/// Direction with the three-rung safeguard:
///   1. solve with the sphere-CG eigenvalue estimates;
///   2. if the factorization flags B indefinite or the solve is not a descent
///      direction (the estimates hit an internal eigenvalue), recompute the
///      extremes densely and solve again;
///   3. if even that fails, steepest descent. Unreachable with exact
///      eigenvalues, but the ladder is total.
inline DirectionInfo safeguard_direction(const Vec& g, const SymMatrix& h, const GammaParams& p,
                                         const ExtremePair& estimates) {
    const double gn = norm2(g);
    auto is_descent = [&](const DirectionInfo& info) {
        return dot(g, info.d) < -1e-12 * gn * norm2(info.d);
    };

    auto rung1 = compute_direction(g, h, p, estimates.lo.value, estimates.hi.value);
    if (rung1 && is_descent(*rung1)) {
        rung1->rung = 1;
        return *rung1;
    }

    const EigDecomp eg = jacobi_eigs(h);
    auto rung2 = compute_direction(g, h, p, eg.values.front(), eg.values.back());
    if (rung2 && is_descent(*rung2)) {
        rung2->rung = 2;
        rung2->fallback_used = true;
        return *rung2;
    }

    DirectionInfo info;
    info.gamma = 1.0;
    info.gamma_case = select_gamma(eg.values.front(), eg.values.back(), p).second;
    info.d = -g;
    info.cos_theta = 1.0;
    info.eig_lo = eg.values.front();
    info.eig_hi = eg.values.back();
    info.fallback_used = true;
    info.rung = 3;
    return info;
}

/// Modified Newton solve: at each iterate blend the Hessian with the identity
/// so the system matrix has eigenvalues >= delta and condition number <= cap,
/// solve for the direction, and take a Wolfe step. Terminates when the
/// gradient norm (Euclidean or max, per config) drops below eps.
inline SolveReport minimize(const Problem& problem, const Vec& x0, const SolverConfig& cfg) {
    cfg.validate();
    if (x0.size() != problem.dim) throw std::invalid_argument("minimize: x0 has wrong dimension");

    Vec x = x0;
    double fx = problem.f(x);
    Vec g = problem.grad(x);
    if (!std::isfinite(fx) || !all_finite(g))
        throw std::runtime_error("minimize: objective evaluation failed at x0");

    auto grad_norm = [&](const Vec& v) {
        return cfg.norm_rule == NormRule::Euclid ? norm2(v) : norm_inf(v);
    };

    SolveReport rep;
    std::optional<Vec> warm_lo, warm_hi;
    int stall_count = 0;

    for (std::size_t k = 0; k < cfg.max_iter; ++k) {
        const double gnorm = grad_norm(g);
        if (gnorm < cfg.eps) {
            rep.status = SolveStatus::Converged;
            rep.x_final = x;
            rep.f_final = fx;
            rep.grad_norm_final = gnorm;
            rep.iterations = rep.trace.size();
            return rep;
        }

        const SymMatrix h = problem.hess(x);  // one Hessian per outer iteration
        const std::size_t eig_cap = cfg.eig_max_iter ? cfg.eig_max_iter : 10 * problem.dim;
        const ExtremePair est =
            extreme_pair(h, cfg.eig_tol, eig_cap, warm_lo ? &*warm_lo : nullptr,
                         warm_hi ? &*warm_hi : nullptr);
        warm_lo = est.lo.vector;
        warm_hi = est.hi.vector;

        const DirectionInfo dir = safeguard_direction(g, h, cfg.gamma_params, est);
        const bool fallback =
            dir.fallback_used || est.lo.method == EigMethod::JacobiFallback;

        const double g_dot_d = dot(g, dir.d);
        auto phi = [&](double a) { return problem.f(axpy(a, dir.d, x)); };
        auto dphi = [&](double a) { return dot(problem.grad(axpy(a, dir.d, x)), dir.d); };
        const LineSearchResult ls = wolfe_search(phi, dphi, cfg.wolfe);

        IterRecord rec;
        rec.k = k;
        rec.f = fx;
        rec.grad_norm = gnorm;
        rec.gamma = dir.gamma;
        rec.cos_theta = dir.cos_theta;
        rec.eig_lo = dir.eig_lo;
        rec.eig_hi = dir.eig_hi;
        rec.fallback_used = fallback;
        rec.gamma_case = dir.gamma_case;
        rec.rung = dir.rung;
        rec.x = x;
        rec.d = dir.d;

        bool accept = false;
        if (ls.status == LineSearchStatus::WolfeSatisfied) {
            accept = true;
        } else {
            // A best-decrease step is usable only when it still makes real,
            // Armijo-consistent progress; otherwise the iterate stays put.
            const bool tiny = (fx - ls.f_new) < 1e-16 * (1.0 + std::abs(fx));
            const bool armijo = ls.f_new <= fx + cfg.wolfe.sigma1 * ls.alpha * g_dot_d;
            accept = !tiny && armijo;
        }

        if (accept) {
            stall_count = 0;
            rec.alpha = ls.alpha;
            rep.trace.push_back(rec);
            x = axpy(ls.alpha, dir.d, x);
            fx = ls.f_new;
            g = problem.grad(x);
        } else {
            ++stall_count;
            rec.alpha = 0.0;
            rep.trace.push_back(rec);
            if (stall_count >= 2) {
                rep.status = SolveStatus::LineSearchStalled;
                rep.x_final = x;
                rep.f_final = fx;
                rep.grad_norm_final = gnorm;
                rep.iterations = rep.trace.size();
                return rep;
            }
        }
    }

    rep.status = SolveStatus::MaxIterations;
    rep.x_final = x;
    rep.f_final = fx;
    rep.grad_norm_final = grad_norm(g);
    rep.iterations = rep.trace.size();
    return rep;
}

}  // namespace mnewt
