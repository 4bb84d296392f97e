#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mnewt/vec.hpp"

namespace mnewt {

/// Dense symmetric matrix in full row-major storage.
///
/// Symmetry is a class invariant: mutation goes through set(), which writes
/// both mirror entries, and construction from raw data rejects input whose
/// asymmetry exceeds 1e-12 relative to the largest entry.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        if (n == 0) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    }

    static SymMatrix identity(std::size_t n) {
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
        return m;
    }

    static SymMatrix diagonal(const Vec& d) {
        SymMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
        return m;
    }

    /// Build from a full row-major array. Entries (i,j) and (j,i) are averaged
    /// so the stored matrix is exactly symmetric; input whose asymmetry exceeds
    /// 1e-12 relative to the largest entry magnitude is rejected.
    static SymMatrix from_rows(std::size_t n, const std::vector<double>& rowmajor) {
        if (rowmajor.size() != n * n)
            throw std::invalid_argument("SymMatrix::from_rows: need n*n entries");
        double amax = 0.0;
        for (double x : rowmajor) amax = std::max(amax, std::abs(x));
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double ij = rowmajor[i * n + j];
                const double ji = rowmajor[j * n + i];
                if (std::abs(ij - ji) > 1e-12 * amax)
                    throw std::invalid_argument("SymMatrix::from_rows: input is not symmetric");
                const double v = (i == j) ? ij : 0.5 * (ij + ji);
                m.a_[i * n + j] = v;
                m.a_[j * n + i] = v;
            }
        }
        return m;
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Writes both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double x : a_) s += x * x;
        return std::sqrt(s);
    }

    double max_abs_diagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) m = std::max(m, std::abs(a_[i * n_ + i]));
        return m;
    }

    const std::vector<double>& data() const { return a_; }

private:
    std::size_t n_;
    std::vector<double> a_;
};

inline Vec matvec(const SymMatrix& m, const Vec& v) {
    if (v.size() != m.size()) throw std::invalid_argument("matvec: dimension mismatch");
    const std::size_t n = m.size();
    Vec r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline double quadratic_form(const SymMatrix& m, const Vec& v) {
    if (v.size() != m.size()) throw std::invalid_argument("quadratic_form: dimension mismatch");
    return dot(v, matvec(m, v));
}

/// Lower-triangular Cholesky factor with strictly positive diagonal.
class CholeskyFactor {
public:
    CholeskyFactor(std::size_t n, std::vector<double> lower)
        : n_(n), l_(std::move(lower)) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return l_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> l_;  // row-major, zero above the diagonal
};

/// Factor m = L*L^T. Returns nullopt when m is not numerically positive
/// definite: a pivot <= n * eps * max|diag(m)| aborts. That threshold keeps
/// matrices whose smallest eigenvalue is a forced floor (1e-8 at default
/// settings) factorable up to n = 300, while indefinite input is flagged for
/// the solver safeguard.
inline std::optional<CholeskyFactor> cholesky_factor(const SymMatrix& m) {
    const std::size_t n = m.size();
    const double tol =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * m.max_abs_diagonal();
    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (d <= tol) return std::nullopt;
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    return CholeskyFactor(n, std::move(l));
}

/// Solve (L*L^T) x = rhs by forward then backward substitution.
inline Vec cholesky_solve(const CholeskyFactor& f, const Vec& rhs) {
    const std::size_t n = f.size();
    if (rhs.size() != n) throw std::invalid_argument("cholesky_solve: dimension mismatch");
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= f(i, k) * y[k];
        y[i] = s / f(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= f(k, ii) * x[k];
        x[ii] = s / f(ii, ii);
    }
    return x;
}

/// Full eigendecomposition of a symmetric matrix.
struct EigDecomp {
    Vec values;                     // ascending
    std::vector<Vec> vectors;       // vectors[i] is the unit eigenvector for values[i]
    int sweeps = 0;                 // Jacobi sweeps spent
};

/// Cyclic Jacobi rotations. Eigenvalues come back sorted ascending with an
/// orthogonal set of eigenvectors. Symmetric input converges in a handful of
/// sweeps; running past 100 sweeps is an internal error.
inline EigDecomp jacobi_eigs(const SymMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> a(m.data());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const double fro = m.frobenius_norm();
    const double stop = 1e-14 * fro;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(2.0 * s);
    };

    int sweeps = 0;
    while (off_norm() > stop) {
        if (++sweeps > 100)
            throw std::runtime_error("jacobi_eigs: no convergence after 100 sweeps");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^T A J with J the (p,q) rotation.
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

    EigDecomp out;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors.assign(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a[order[i] * n + order[i]];
        for (std::size_t k = 0; k < n; ++k) out.vectors[i][k] = v[k * n + order[i]];
    }
    return out;
}

}  // namespace mnewt
