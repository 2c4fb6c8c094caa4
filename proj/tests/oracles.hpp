#pragma once

// Test-only reference computations, independent of the library's solvers.

#include <algorithm>
#include <array>
#include <cmath>

namespace oracle {

/// Number of eigenvalues of the symmetric tridiagonal matrix
/// (diag d, off-diagonal e) that are smaller than x (Sturm sequence count).
inline int sturm_count(const std::array<double, 3>& d, const std::array<double, 2>& e, double x) {
    int count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < 3; ++i) {
        if (q == 0.0) q = 1e-300;
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Eigenvalues of a 3x3 symmetric tridiagonal matrix by bisection on the
/// Sturm count, ascending.
inline std::array<double, 3> tridiagonal_eigenvalues(const std::array<double, 3>& d, const std::array<double, 2>& e) {
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < 2 ? std::abs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    lo -= 1.0;
    hi += 1.0;
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            if (sturm_count(d, e, mid) > k) b = mid;
            else a = mid;
        }
        out[k] = 0.5 * (a + b);
    }
    return out;
}

/// Central difference of f at x.
template <typename F>
double central_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
