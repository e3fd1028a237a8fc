#pragma once

#include <array>
#include <stdexcept>

#include "triflag/rational.hpp"

namespace triflag {

/// Dense 3x3 matrix over an arbitrary scalar field.
template <class T>
struct Mat3 {
    std::array<std::array<T, 3>, 3> m{};

    constexpr T& operator()(int i, int j) { return m[i][j]; }
    constexpr const T& operator()(int i, int j) const { return m[i][j]; }

    static Mat3 zero() { return Mat3{}; }

    static Mat3 identity() {
        Mat3 r;
        for (int i = 0; i < 3; ++i) r(i, i) = T(1);
        return r;
    }

    static Mat3 diag(const T& a, const T& b, const T& c) {
        Mat3 r;
        r(0, 0) = a;
        r(1, 1) = b;
        r(2, 2) = c;
        return r;
    }

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s = a(i, 0) * b(0, j);
                s += a(i, 1) * b(1, j);
                s += a(i, 2) * b(2, j);
                r(i, j) = s;
            }
        return r;
    }

    friend Mat3 operator+(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) + b(i, j);
        return r;
    }

    friend Mat3 operator-(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = a(i, j) - b(i, j);
        return r;
    }

    friend Mat3 operator*(const T& c, const Mat3& a) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = c * a(i, j);
        return r;
    }

    friend bool operator==(const Mat3& a, const Mat3& b) { return a.m == b.m; }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = m[j][i];
        return r;
    }

    T det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    T trace() const { return m[0][0] + m[1][1] + m[2][2]; }

    /// Adjugate-based inverse; exact over Rat.
    Mat3 inverse() const {
        const T d = det();
        if (d == T(0)) throw std::invalid_argument("singular matrix");
        Mat3 adj;
        adj(0, 0) = m[1][1] * m[2][2] - m[1][2] * m[2][1];
        adj(0, 1) = m[0][2] * m[2][1] - m[0][1] * m[2][2];
        adj(0, 2) = m[0][1] * m[1][2] - m[0][2] * m[1][1];
        adj(1, 0) = m[1][2] * m[2][0] - m[1][0] * m[2][2];
        adj(1, 1) = m[0][0] * m[2][2] - m[0][2] * m[2][0];
        adj(1, 2) = m[0][2] * m[1][0] - m[0][0] * m[1][2];
        adj(2, 0) = m[1][0] * m[2][1] - m[1][1] * m[2][0];
        adj(2, 1) = m[0][1] * m[2][0] - m[0][0] * m[2][1];
        adj(2, 2) = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = adj(i, j) / d;
        return r;
    }

    bool is_upper_triangular() const {
        return m[1][0] == T(0) && m[2][0] == T(0) && m[2][1] == T(0);
    }
};

using MatQ = Mat3<Rat>;
using MatD = Mat3<double>;

inline MatD to_matd(const MatQ& a) {
    MatD r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = to_double(a(i, j));
    return r;
}

}  // namespace triflag
