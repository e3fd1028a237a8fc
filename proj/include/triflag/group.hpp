#pragma once

#include <stdexcept>

#include "triflag/mat3.hpp"

namespace triflag {

// Coordinate forms of the unipotent upper-triangular group N and the diagonal
// group D inside SL3.  Multiplication laws are closed-form; everything here is
// generic over the scalar so the same code serves exact and floating uses.

/// n(x,y,z) = unit upper triangular with (1,2)=x, (1,3)=y, (2,3)=z.
template <class T>
struct Unipotent {
    T x{}, y{}, z{};

    Mat3<T> to_matrix() const {
        auto r = Mat3<T>::identity();
        r(0, 1) = x;
        r(0, 2) = y;
        r(1, 2) = z;
        return r;
    }

    static Unipotent from_matrix(const Mat3<T>& m) {
        if (!(m(0, 0) == T(1) && m(1, 1) == T(1) && m(2, 2) == T(1) && m(1, 0) == T(0) &&
              m(2, 0) == T(0) && m(2, 1) == T(0)))
            throw std::invalid_argument("matrix is not unit upper triangular");
        return {m(0, 1), m(0, 2), m(1, 2)};
    }

    friend bool operator==(const Unipotent& a, const Unipotent& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

/// d(a,b,c), a*b*c = 1; entries may be negative (D = AM).
template <class T>
struct Diagonal {
    T a{1}, b{1}, c{1};

    Mat3<T> to_matrix() const { return Mat3<T>::diag(a, b, c); }

    friend bool operator==(const Diagonal& a_, const Diagonal& b_) {
        return a_.a == b_.a && a_.b == b_.b && a_.c == b_.c;
    }
};

/// n1 * n2 in coordinates: n(x1+x2, y1+y2+x1*z2, z1+z2).
template <class T>
Unipotent<T> unip_mul(const Unipotent<T>& n1, const Unipotent<T>& n2) {
    return {n1.x + n2.x, n1.y + n2.y + n1.x * n2.z, n1.z + n2.z};
}

/// n(x,y,z)^{-1} = n(-x, xz-y, -z).
template <class T>
Unipotent<T> unip_inv(const Unipotent<T>& n) {
    return {-n.x, n.x * n.z - n.y, -n.z};
}

/// d n d^{-1} = n(x*a/b, y*a/c, z*b/c).
template <class T>
Unipotent<T> diag_conj(const Diagonal<T>& d, const Unipotent<T>& n) {
    return {n.x * d.a / d.b, n.y * d.a / d.c, n.z * d.b / d.c};
}

using UnipQ = Unipotent<Rat>;
using UnipD = Unipotent<double>;
using DiagQ = Diagonal<Rat>;
using DiagD = Diagonal<double>;

inline DiagQ make_diag(const Rat& a, const Rat& b) {
    if (a == 0 || b == 0) throw std::invalid_argument("diagonal entries must be nonzero");
    return {a, b, Rat(1) / (a * b)};
}

}  // namespace triflag
