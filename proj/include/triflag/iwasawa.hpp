#pragma once

#include <cmath>
#include <stdexcept>

#include "triflag/group.hpp"
#include "triflag/mat3.hpp"

namespace triflag {

/// g = a * n * k with a positive diagonal (det 1), n unit upper triangular,
/// k in SO(3).  (s,t) are the A-coordinates, a = diag(e^s, e^t, e^{-s-t}).
struct IwasawaTriple {
    double s = 0, t = 0;
    UnipD n;
    MatD k;

    double a1() const { return std::exp(s); }
    double a2() const { return std::exp(t); }
    double a3() const { return std::exp(-s - t); }
    double a_rho() const { return std::exp(2 * s + t); }

    MatD reconstruct() const {
        MatD an = UnipD{n.x, n.y, n.z}.to_matrix();
        const double d[3] = {a1(), a2(), a3()};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) an(i, j) *= d[i];
        return an * k;
    }
};

/// Lower-right 2x2 block of g g^T; the quantities entering the closed a^rho
/// formula.
struct GramBlock {
    double B = 0, H = 0, C = 0;
};

inline GramBlock gram_block(const MatD& g) {
    GramBlock b;
    b.B = g(1, 0) * g(1, 0) + g(1, 1) * g(1, 1) + g(1, 2) * g(1, 2);
    b.C = g(2, 0) * g(2, 0) + g(2, 1) * g(2, 1) + g(2, 2) * g(2, 2);
    b.H = g(1, 0) * g(2, 0) + g(1, 1) * g(2, 1) + g(1, 2) * g(2, 2);
    return b;
}

/// Closed formula a^rho = 1 / (sqrt(BC - H^2) sqrt(C)).  The subtraction runs
/// in long double; for det-1 inputs BC - H^2 = |r2 x r3|^2 > 0.
inline double a_rho(const MatD& g) {
    const GramBlock b = gram_block(g);
    const long double det2 =
        static_cast<long double>(b.B) * b.C - static_cast<long double>(b.H) * b.H;
    if (!(det2 > 0) || !(b.C > 0)) throw std::invalid_argument("a_rho: degenerate input");
    return static_cast<double>(1.0L / (std::sqrt(det2) * std::sqrt(static_cast<long double>(b.C))));
}

/// Iwasawa decomposition via the factorization g g^T = (an)(an)^T with upper
/// triangular positive-diagonal factor U, then k = U^{-1} g.  The diagonal of
/// U comes from row norms and the cross product of rows 2,3, which avoids the
/// cancellation in the textbook reverse Cholesky.
inline IwasawaTriple iwasawa(const MatD& g, double det_tol = 1e-6) {
    const double det = g.det();
    if (std::abs(det - 1.0) > det_tol)
        throw std::invalid_argument("iwasawa: determinant must be 1 within tolerance");

    const double r2[3] = {g(1, 0), g(1, 1), g(1, 2)};
    const double r3[3] = {g(2, 0), g(2, 1), g(2, 2)};
    const double cr[3] = {r2[1] * r3[2] - r2[2] * r3[1], r2[2] * r3[0] - r2[0] * r3[2],
                          r2[0] * r3[1] - r2[1] * r3[0]};
    const double n3 = std::sqrt(r3[0] * r3[0] + r3[1] * r3[1] + r3[2] * r3[2]);
    const double ncr = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    if (!(n3 > 0) || !(ncr > 0)) throw std::invalid_argument("iwasawa: degenerate rows");

    const double a3 = n3;
    const double a2 = ncr / n3;
    const double a1 = 1.0 / ncr;  // a1 a2 a3 = |det| = 1

    const GramBlock b = gram_block(g);
    MatD U = MatD::zero();
    U(2, 2) = a3;
    U(1, 2) = b.H / a3;
    U(1, 1) = a2;
    U(0, 2) = (g(0, 0) * r3[0] + g(0, 1) * r3[1] + g(0, 2) * r3[2]) / a3;
    U(0, 1) = ((g(0, 0) * r2[0] + g(0, 1) * r2[1] + g(0, 2) * r2[2]) - U(0, 2) * U(1, 2)) / a2;
    U(0, 0) = a1;

    // k = U^{-1} g by back substitution on rows.
    MatD k;
    for (int j = 0; j < 3; ++j) {
        k(2, j) = g(2, j) / U(2, 2);
        k(1, j) = (g(1, j) - U(1, 2) * k(2, j)) / U(1, 1);
        k(0, j) = (g(0, j) - U(0, 1) * k(1, j) - U(0, 2) * k(2, j)) / U(0, 0);
    }

    IwasawaTriple r;
    r.s = std::log(a1);
    r.t = std::log(a2);
    r.n = {U(0, 1) / a1, U(0, 2) / a1, U(1, 2) / a2};
    r.k = k;
    return r;
}

}  // namespace triflag
