#pragma once

#include <array>
#include <vector>

#include "triflag/mat3.hpp"

namespace triflag {

// Exact linear algebra in sl3 (traceless 3x3 over Q, dim 8).  Basis order:
// E12, E13, E23, E21, E31, E32, H1 = E11-E22, H2 = E22-E33.

using Vec8 = std::array<Rat, 8>;

inline MatQ sl3_basis_element(int idx) {
    MatQ m = MatQ::zero();
    switch (idx) {
        case 0: m(0, 1) = 1; break;
        case 1: m(0, 2) = 1; break;
        case 2: m(1, 2) = 1; break;
        case 3: m(1, 0) = 1; break;
        case 4: m(2, 0) = 1; break;
        case 5: m(2, 1) = 1; break;
        case 6: m(0, 0) = 1; m(1, 1) = -1; break;
        case 7: m(1, 1) = 1; m(2, 2) = -1; break;
    }
    return m;
}

inline MatQ vec8_to_matrix(const Vec8& v) {
    MatQ m = MatQ::zero();
    for (int i = 0; i < 8; ++i) m = m + v[i] * sl3_basis_element(i);
    return m;
}

inline Vec8 matrix_to_vec8(const MatQ& m) {
    // trace must vanish; diagonal = c1 H1 + c2 H2 with c1 = m00, c2 = -m22.
    return {m(0, 1), m(0, 2), m(1, 2), m(1, 0), m(2, 0), m(2, 1), m(0, 0), -m(2, 2)};
}

/// Subspace of sl3 given by an exact basis.
struct LieSubspace {
    std::vector<Vec8> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

namespace detail {

/// Row-reduce in place, returns rank.  Rows are Vec8-like rows of arbitrary
/// width w <= 8.
inline int row_reduce(std::vector<Vec8>& rows, int width) {
    int rank = 0;
    for (int col = 0; col < width && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[piv], rows[rank]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const Rat f = rows[r][col] / rows[rank][col];
            for (int c = 0; c < width; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// Null space of the layout rows (each row = linear functional on sl3).
inline LieSubspace null_space(std::vector<Vec8> rows) {
    const int rank = detail::row_reduce(rows, 8);
    rows.resize(rank);
    // Identify pivot columns of the reduced system.
    std::array<int, 8> pivot_of_col{};
    pivot_of_col.fill(-1);
    {
        int r = 0;
        for (int c = 0; c < 8 && r < rank; ++c)
            if (rows[r][c] != 0) pivot_of_col[c] = r, ++r;
    }
    LieSubspace ns;
    for (int freec = 0; freec < 8; ++freec) {
        if (pivot_of_col[freec] >= 0) continue;
        Vec8 v{};
        v[freec] = 1;
        for (int c = 0; c < 8; ++c) {
            const int r = pivot_of_col[c];
            if (r >= 0) v[c] = -rows[r][freec] / rows[r][c];
        }
        ns.basis.push_back(v);
    }
    return ns;
}

/// Lie algebra of the stabilizer of the flag triple (P, P h1, P h2):
/// { Y in sl3 : Y, h1 Y h1^{-1}, h2 Y h2^{-1} all upper triangular }.
inline LieSubspace stabilizer_algebra(const MatQ& h1, const MatQ& h2) {
    const MatQ h1i = h1.inverse(), h2i = h2.inverse();
    std::vector<Vec8> rows;
    auto add_lower_constraints = [&rows](const std::array<MatQ, 8>& images) {
        static constexpr int kLower[3][2] = {{1, 0}, {2, 0}, {2, 1}};
        for (auto [i, j] : kLower) {
            Vec8 row{};
            for (int b = 0; b < 8; ++b) row[b] = images[b](i, j);
            rows.push_back(row);
        }
    };
    std::array<MatQ, 8> id_imgs, h1_imgs, h2_imgs;
    for (int b = 0; b < 8; ++b) {
        const MatQ e = sl3_basis_element(b);
        id_imgs[b] = e;
        h1_imgs[b] = h1 * e * h1i;
        h2_imgs[b] = h2 * e * h2i;
    }
    add_lower_constraints(id_imgs);
    add_lower_constraints(h1_imgs);
    add_lower_constraints(h2_imgs);
    return null_space(rows);
}

}  // namespace triflag
