#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "triflag/mat3.hpp"

namespace triflag {

/// Purely imaginary induction character: a^lambda = exp(i(l1 s + l2 t)) for
/// a = diag(e^s, e^t, e^{-s-t}); |a^lambda| = 1.
struct InductionParameter {
    double l1 = 0, l2 = 0;

    bool is_zero() const { return l1 == 0 && l2 == 0; }
};

// Catalog of smooth M-invariant functions on SO(3).  Every entry is a
// polynomial in products of two entries of the same row of k, which makes the
// invariance under the four sign matrices of M structural.  Layout:
//   0        : constant 1
//   1  .. 6  : 3 k_{r,a} k_{r,b}, rows r=0,1, (a,b) in {(0,1),(0,2),(1,2)}
//   7  .. 12 : 3 k_{r,a}^2, rows r=0,1, a = 0,1,2
//   13 .. 33 : pairwise products of entries 1..6 (degree 4)
namespace testfn_detail {

struct Quad {
    int row, a, b;
};

inline constexpr std::array<Quad, 12> kQuads{{{0, 0, 1},
                                              {0, 0, 2},
                                              {0, 1, 2},
                                              {1, 0, 1},
                                              {1, 0, 2},
                                              {1, 1, 2},
                                              {0, 0, 0},
                                              {0, 1, 1},
                                              {0, 2, 2},
                                              {1, 0, 0},
                                              {1, 1, 1},
                                              {1, 2, 2}}};

inline double quad_eval(int idx, const MatD& k) {
    const Quad& q = kQuads[idx];
    return 3.0 * k(q.row, q.a) * k(q.row, q.b);
}

}  // namespace testfn_detail

inline constexpr int kCatalogSize = 34;

inline double catalog_eval(int idx, const MatD& k) {
    using namespace testfn_detail;
    if (idx == 0) return 1.0;
    if (idx <= 12) return quad_eval(idx - 1, k);
    if (idx < kCatalogSize) {
        // pairs (i,j), 0 <= i <= j < 6, enumerated row-major
        int t = idx - 13;
        int i = 0;
        while (t >= 6 - i) t -= 6 - i, ++i;
        const int j = i + t;
        return quad_eval(i, k) * quad_eval(j, k);
    }
    throw std::out_of_range("catalog index");
}

/// Finite complex combination of catalog entries together with its induction
/// parameter; the restriction-to-K incarnation of a smooth section.
struct TestFunction {
    InductionParameter lambda;
    std::vector<std::pair<int, std::complex<double>>> terms;  // (catalog idx, coeff)

    static TestFunction unit(InductionParameter l = {}) { return {l, {{0, {1.0, 0.0}}}}; }

    static TestFunction catalog(int idx, InductionParameter l = {},
                                std::complex<double> coeff = {1.0, 0.0}) {
        return {l, {{idx, coeff}}};
    }

    TestFunction conjugated() const {
        TestFunction r{{-lambda.l1, -lambda.l2}, terms};
        for (auto& [idx, c] : r.terms) c = std::conj(c);
        return r;
    }

    std::complex<double> eval(const MatD& k) const {
        std::complex<double> s{0.0, 0.0};
        for (const auto& [idx, c] : terms) s += c * catalog_eval(idx, k);
        return s;
    }
};

/// The four diagonal sign matrices of determinant one.
inline std::array<MatD, 4> m_group() {
    return {MatD::diag(1, 1, 1), MatD::diag(1, -1, -1), MatD::diag(-1, 1, -1),
            MatD::diag(-1, -1, 1)};
}

/// Index triples used by the independence experiment; chosen to vary the
/// third slot (the u-sensitive one) across the whole quadratic range.
inline std::vector<std::array<int, 3>> default_triples(int count) {
    std::vector<std::array<int, 3>> out;
    for (int j = 0; out.size() < static_cast<size_t>(count); ++j) {
        const int i1 = (j % 2 == 0) ? 0 : 1 + (j % 6);
        const int i2 = 1 + ((j * 5 + 2) % 12);
        const int i3 = (j < 12) ? 1 + (j % 12) : 13 + ((j * 7) % 21);
        out.push_back({i1, i2, i3});
    }
    return out;
}

}  // namespace triflag
