#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mnewt {

using Vec = std::vector<double>;

inline void require_same_size(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline double dot(const Vec& a, const Vec& b) {
    require_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& v) {
    return std::sqrt(dot(v, v));
}

inline double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline Vec operator+(const Vec& a, const Vec& b) {
    require_same_size(a, b, "operator+");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    require_same_size(a, b, "operator-");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double c, const Vec& v) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

inline Vec operator-(const Vec& v) {
    return -1.0 * v;
}

/// a + c*b, the workhorse update.
inline Vec axpy(double c, const Vec& b, const Vec& a) {
    require_same_size(a, b, "axpy");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

inline Vec normalized(const Vec& v) {
    const double n = norm2(v);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return (1.0 / n) * v;
}

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace mnewt
