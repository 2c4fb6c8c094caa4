#pragma once

// Fixed-size dense algebra for the three-site problem: 3-vectors, 3x3
// matrices over real or complex scalars, and a cyclic Jacobi eigensolver
// for small real symmetric matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

#include "adiapass/errors.hpp"

namespace adiapass {

using complex = std::complex<double>;

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
constexpr T conj_if(const T& x) {
    if constexpr (is_complex<T>::value) {
        return std::conj(x);
    } else {
        return x;
    }
}

}  // namespace detail

template <typename T>
struct Vector3 {
    std::array<T, 3> c{};

    constexpr T& operator[](std::size_t i) noexcept { return c[i]; }
    constexpr const T& operator[](std::size_t i) const noexcept { return c[i]; }

    constexpr Vector3& operator+=(const Vector3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vector3& operator-=(const Vector3& o) {
        for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
        return *this;
    }
    template <typename S>
    constexpr Vector3& operator*=(const S& s) {
        for (auto& x : c) x *= s;
        return *this;
    }

    friend constexpr Vector3 operator+(Vector3 a, const Vector3& b) { return a += b; }
    friend constexpr Vector3 operator-(Vector3 a, const Vector3& b) { return a -= b; }
    template <typename S>
    friend constexpr Vector3 operator*(const S& s, Vector3 v) {
        return v *= s;
    }
    friend constexpr bool operator==(const Vector3&, const Vector3&) = default;

    static constexpr Vector3 basis(std::size_t i) {
        Vector3 v;
        v.c[i] = T(1);
        return v;
    }
};

/// <a|b>, conjugating the left argument for complex scalars.
template <typename T>
constexpr T dot(const Vector3<T>& a, const Vector3<T>& b) {
    T s{};
    for (std::size_t i = 0; i < 3; ++i) s += detail::conj_if(a[i]) * b[i];
    return s;
}

template <typename T>
double norm_sq(const Vector3<T>& v) {
    double s = 0.0;
    for (const auto& x : v.c) s += std::norm(x);
    return s;
}

template <typename T>
double norm(const Vector3<T>& v) {
    return std::sqrt(norm_sq(v));
}

/// Row-major 3x3 matrix.
template <typename T>
struct Matrix3 {
    std::array<T, 9> a{};

    constexpr T& operator()(std::size_t i, std::size_t j) noexcept { return a[3 * i + j]; }
    constexpr const T& operator()(std::size_t i, std::size_t j) const noexcept {
        return a[3 * i + j];
    }

    static constexpr Matrix3 zero() { return {}; }
    static constexpr Matrix3 identity() { return diagonal(T(1), T(1), T(1)); }
    static constexpr Matrix3 diagonal(T d0, T d1, T d2) {
        Matrix3 m;
        m(0, 0) = d0;
        m(1, 1) = d1;
        m(2, 2) = d2;
        return m;
    }

    constexpr Matrix3& operator+=(const Matrix3& o) {
        for (std::size_t k = 0; k < 9; ++k) a[k] += o.a[k];
        return *this;
    }
    constexpr Matrix3& operator-=(const Matrix3& o) {
        for (std::size_t k = 0; k < 9; ++k) a[k] -= o.a[k];
        return *this;
    }
    template <typename S>
    constexpr Matrix3& operator*=(const S& s) {
        for (auto& x : a) x *= s;
        return *this;
    }

    friend constexpr Matrix3 operator+(Matrix3 x, const Matrix3& y) { return x += y; }
    friend constexpr Matrix3 operator-(Matrix3 x, const Matrix3& y) { return x -= y; }
    template <typename S>
    friend constexpr Matrix3 operator*(const S& s, Matrix3 m) {
        return m *= s;
    }
    friend constexpr bool operator==(const Matrix3&, const Matrix3&) = default;

    friend constexpr Matrix3 operator*(const Matrix3& x, const Matrix3& y) {
        Matrix3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                T s{};
                for (std::size_t k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
                r(i, j) = s;
            }
        return r;
    }

    friend constexpr Vector3<T> operator*(const Matrix3& m, const Vector3<T>& v) {
        Vector3<T> r;
        for (std::size_t i = 0; i < 3; ++i)
            r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
        return r;
    }

    template <typename U>
    constexpr Matrix3<U> cast() const {
        Matrix3<U> r;
        for (std::size_t k = 0; k < 9; ++k) r.a[k] = U(a[k]);
        return r;
    }
};

/// Product of matrices with different scalar types (e.g. real times complex).
template <typename A, typename B>
constexpr auto multiply(const Matrix3<A>& x, const Matrix3<B>& y) {
    using R = std::common_type_t<A, B>;
    Matrix3<R> r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            R s{};
            for (std::size_t k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

template <typename A, typename B>
constexpr auto multiply(const Matrix3<A>& m, const Vector3<B>& v) {
    using R = std::common_type_t<A, B>;
    Vector3<R> r;
    for (std::size_t i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    return r;
}

template <typename T>
constexpr Matrix3<T> adjoint(const Matrix3<T>& m) {
    Matrix3<T> r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = detail::conj_if(m(j, i));
    return r;
}

template <typename T>
constexpr T trace(const Matrix3<T>& m) {
    return m(0, 0) + m(1, 1) + m(2, 2);
}

/// [x, y] = xy - yx
template <typename T>
constexpr Matrix3<T> commutator(const Matrix3<T>& x, const Matrix3<T>& y) {
    return x * y - y * x;
}

template <typename T>
double max_abs(const Matrix3<T>& m) {
    double r = 0.0;
    for (const auto& x : m.a) r = std::max(r, std::abs(x));
    return r;
}

template <typename T>
double max_abs(const Vector3<T>& v) {
    double r = 0.0;
    for (const auto& x : v.c) r = std::max(r, std::abs(x));
    return r;
}

/// Largest elementwise |m - m^dagger|.
template <typename T>
double hermiticity_defect(const Matrix3<T>& m) {
    return max_abs(m - adjoint(m));
}

/// |v><v|
template <typename T>
constexpr Matrix3<T> outer(const Vector3<T>& v) {
    Matrix3<T> r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = v[i] * detail::conj_if(v[j]);
    return r;
}

/// Anti-diagonal permutation reversing the site order.
template <typename T>
constexpr Matrix3<T> reversal() {
    Matrix3<T> p;
    p(0, 2) = T(1);
    p(1, 1) = T(1);
    p(2, 0) = T(1);
    return p;
}

template <std::size_t N>
using SquareArray = std::array<std::array<double, N>, N>;

/// Eigenpairs sorted ascending; `vectors[k]` is the k-th eigenvector.
template <std::size_t N>
struct SymmetricEigen {
    std::array<double, N> values{};
    std::array<std::array<double, N>, N> vectors{};
    int sweeps = 0;
};

/// Cyclic Jacobi for a real symmetric N x N matrix. Converges when the
/// off-diagonal Frobenius norm drops to `rel_tol * ||A||_F`; throws
/// ConvergenceError after `max_sweeps`.
template <std::size_t N>
SymmetricEigen<N> jacobi_eigen(SquareArray<N> a, double rel_tol = 1e-14, int max_sweeps = 100) {
    SquareArray<N> v{};
    for (std::size_t i = 0; i < N; ++i) v[i][i] = 1.0;

    double frob_sq = 0.0;
    for (const auto& row : a)
        for (double x : row) {
            if (!std::isfinite(x)) throw ConvergenceError("jacobi_eigen: non-finite input");
            frob_sq += x * x;
        }
    const double threshold = rel_tol * std::sqrt(frob_sq);

    auto off_norm = [&a] {
        double s = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = 0; q < N; ++q)
                if (p != q) s += a[p][q] * a[p][q];
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > threshold) {
        if (sweep == max_sweeps)
            throw ConvergenceError("jacobi_eigen: no convergence after " +
                                   std::to_string(max_sweeps) + " sweeps");
        ++sweep;
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                // t = tan(phi) of the smaller rotation angle annihilating a[p][q]
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

    SymmetricEigen<N> out;
    out.sweeps = sweep;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a[order[k]][order[k]];
        for (std::size_t i = 0; i < N; ++i) out.vectors[k][i] = v[i][order[k]];
    }
    return out;
}

/// Eigenvalues of a complex Hermitian 3x3 matrix via its real 6x6 embedding
/// [[Re, -Im], [Im, Re]]; each eigenvalue appears twice there.
inline std::array<double, 3> hermitian_eigenvalues(const Matrix3<complex>& m) {
    SquareArray<6> big{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            // symmetrize so roundoff asymmetry cannot stall the solver
            const complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
            big[i][j] = h.real();
            big[i + 3][j + 3] = h.real();
            big[i][j + 3] = -h.imag();
            big[i + 3][j] = h.imag();
        }
    const auto e = jacobi_eigen<6>(big);
    return {e.values[0], e.values[2], e.values[4]};
}

}  // namespace adiapass
