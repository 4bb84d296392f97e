#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mnewt/sym_matrix.hpp"
#include "mnewt/vec.hpp"

namespace mnewt {

/// Blend-selection parameters: delta is the floor forced on the smallest
/// eigenvalue of the blended matrix, cap the ceiling on its condition number.
struct GammaParams {
    double delta = 1e-8;
    double cap = 1e12;

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("GammaParams: delta must be in (0,1)");
        if (!(cap >= 1.0)) throw std::invalid_argument("GammaParams: cap must be >= 1");
    }
};

/// Which selection rule produced gamma.
enum class GammaCase { Zero, A, B, MaxAB };

inline const char* to_string(GammaCase c) {
    switch (c) {
        case GammaCase::Zero: return "zero";
        case GammaCase::A: return "a";
        case GammaCase::B: return "b";
        case GammaCase::MaxAB: return "max_ab";
    }
    return "unknown";
}

struct DirectionInfo {
    double gamma = 0.0;
    Vec d;
    double cos_theta = 0.0;
    double eig_lo = 0.0;
    double eig_hi = 0.0;
    bool fallback_used = false;  // an exact recompute (or worse) was needed
    GammaCase gamma_case = GammaCase::Zero;
    int rung = 1;  // 1 = estimates sufficed, 2 = dense eigenvalues, 3 = steepest descent
};

/// Blend coefficient for B = gamma I + (1 - gamma) H from the extreme
/// eigenvalues of H:
///   a = (delta - lo) / (1 - lo)                    pushes lambda_min(B) up to delta,
///   b = (hi - lo*cap) / (cap - 1 + hi - lo*cap)    pulls cond(B) down to cap,
/// and the four cases pick 0, a, b, or max{a, b} depending on which bound is
/// violated.
///
/// Both bounds are one-sided in gamma (a larger gamma raises the eigenvalue
/// floor and lowers the condition number), while the eigenvalue floor is a
/// near-total cancellation in gamma + (1 - gamma) lo when lo is large and
/// negative. So a and b are rounded up by a few ulps: enough to dominate
/// their own evaluation error, far below anything a caller can observe. The
/// result is clamped to [0,1].
inline std::pair<double, GammaCase> select_gamma(double eig_lo, double eig_hi,
                                                 const GammaParams& p) {
    p.validate();
    if (eig_lo > eig_hi) throw std::invalid_argument("select_gamma: eig_lo > eig_hi");

    const bool floor_ok = eig_lo >= p.delta;
    const bool cond_ok = eig_hi <= eig_lo * p.cap;

    constexpr double round_up = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
    auto clamp01 = [](double g) { return std::clamp(g, 0.0, 1.0); };
    auto case_a = [&]() {
        assert(eig_lo < 1.0);  // eig_lo < delta < 1 here
        return round_up * ((p.delta - eig_lo) / (1.0 - eig_lo));
    };
    auto case_b = [&]() {
        const double excess = eig_hi - eig_lo * p.cap;
        return round_up * (excess / (p.cap - 1.0 + excess));
    };

    if (floor_ok && cond_ok) return {0.0, GammaCase::Zero};
    if (!floor_ok && cond_ok) return {clamp01(case_a()), GammaCase::A};
    if (floor_ok && !cond_ok) return {clamp01(case_b()), GammaCase::B};
    return {clamp01(std::max(case_a(), case_b())), GammaCase::MaxAB};
}

/// B = gamma I + (1 - gamma) H; shares the eigenvectors of H, with each
/// eigenvalue mapped to gamma + (1 - gamma) lambda.
inline SymMatrix build_B(const SymMatrix& h, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("build_B: gamma must be in [0,1]");
    const std::size_t n = h.size();
    SymMatrix b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.set(i, i, gamma + (1.0 - gamma) * h(i, i));
        for (std::size_t j = i + 1; j < n; ++j) b.set(i, j, (1.0 - gamma) * h(i, j));
    }
    return b;
}

/// Direction quality -g'd / (||g|| ||d||), clamped into [-1, 1].
inline double cos_theta(const Vec& g, const Vec& d) {
    const double gn = norm2(g);
    const double dn = norm2(d);
    if (gn == 0.0 || dn == 0.0) throw std::invalid_argument("cos_theta: zero vector");
    return std::clamp(-dot(g, d) / (gn * dn), -1.0, 1.0);
}

/// Assemble B from the supplied extreme-eigenvalue estimates and solve
/// B d = -g. Returns nullopt when the factorization finds B numerically
/// indefinite, which tells the caller the estimates missed the true extremes
/// (an internal eigenvalue) and the safeguard ladder must take over.
inline std::optional<DirectionInfo> compute_direction(const Vec& g, const SymMatrix& h,
                                                      const GammaParams& p, double eig_lo,
                                                      double eig_hi) {
    if (norm2(g) == 0.0) throw std::invalid_argument("compute_direction: zero gradient");
    const auto [gamma, gcase] = select_gamma(eig_lo, eig_hi, p);
    const SymMatrix b = build_B(h, gamma);
    const auto factor = cholesky_factor(b);
    if (!factor) return std::nullopt;

    DirectionInfo info;
    info.gamma = gamma;
    info.gamma_case = gcase;
    info.eig_lo = eig_lo;
    info.eig_hi = eig_hi;
    info.d = cholesky_solve(*factor, -g);
    info.cos_theta = cos_theta(g, info.d);
    return info;
}

}  // namespace mnewt
