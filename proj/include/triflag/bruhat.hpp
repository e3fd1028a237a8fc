#pragma once

#include <array>
#include <stdexcept>

#include "triflag/group.hpp"
#include "triflag/mat3.hpp"
#include "triflag/weyl.hpp"

namespace triflag {

namespace detail {

/// Exact rank of the submatrix rows i..2, columns 0..j of g.
inline int corner_rank(const MatQ& g, int i, int j) {
    // Gaussian elimination on a copy of the (3-i) x (j+1) block.
    std::array<std::array<Rat, 3>, 3> a{};
    const int rows = 3 - i, cols = j + 1;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a[r][c] = g(i + r, c);
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            if (a[r][c] == 0) continue;
            const Rat f = a[r][c] / a[rank][c];
            for (int cc = c; cc < cols; ++cc) a[r][cc] -= f * a[rank][cc];
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// The unique w with g ∈ PwP, recovered from the rank table of the
/// lower-left corner submatrices: these ranks are invariant under
/// g -> p g q for upper-triangular p, q, and determine the pivot
/// permutation sigma(j) = max{ i : rank(i..2, 0..j) jumps at column j }.
inline Weyl bruhat_cell(const MatQ& g) {
    if (g.det() == 0) throw std::invalid_argument("bruhat_cell: singular input");
    std::array<int, 3> sigma{};
    for (int j = 0; j < 3; ++j) {
        int s = -1;
        for (int i = 0; i < 3; ++i) {
            const int now = detail::corner_rank(g, i, j);
            const int before = j == 0 ? 0 : detail::corner_rank(g, i, j - 1);
            if (now > before) s = i;  // keep the deepest row with a jump
        }
        sigma[j] = s;
    }
    for (Weyl w : kAllWeyl)
        if (weyl_perm(w) == sigma) return w;
    throw std::logic_error("rank table did not define a permutation");
}

struct BruhatFactorization {
    MatQ p;        // upper triangular, det 1
    Weyl w;        // cell
    UnipQ n;       // unit upper triangular
};

/// Exact factorization g = p * rep(w) * n.  Elimination with row operations
/// from above (left multiplication by unit upper triangulars) and column
/// operations from the left (right multiplication by unit upper
/// triangulars), pivots processed in column order.
inline BruhatFactorization bruhat_factor(const MatQ& g) {
    MatQ a = g;
    MatQ l_inv = MatQ::identity();  // accumulates inverse row ops (upper unipotent)
    MatQ r_inv = MatQ::identity();  // accumulates inverse col ops (upper unipotent)
    std::array<int, 3> pivot_row{-1, -1, -1};
    std::array<bool, 3> used{false, false, false};

    for (int j = 0; j < 3; ++j) {
        // Clear entries sitting in already-pivoted rows using earlier pivot columns.
        for (int jp = 0; jp < j; ++jp) {
            const int i = pivot_row[jp];
            if (a(i, j) == 0) continue;
            const Rat f = a(i, j) / a(i, jp);
            for (int r = 0; r < 3; ++r) a(r, j) -= f * a(r, jp);  // col_j -= f col_jp
            for (int c = 0; c < 3; ++c) r_inv(jp, c) += f * r_inv(j, c);
        }
        // Bottom-most nonzero among unused rows is the pivot.
        int piv = -1;
        for (int i = 2; i >= 0; --i)
            if (!used[i] && a(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) throw std::invalid_argument("bruhat_factor: singular input");
        pivot_row[j] = piv;
        used[piv] = true;
        // Clear unused rows above the pivot: row_i -= f row_piv (i < piv).
        for (int i = 0; i < piv; ++i) {
            if (used[i] || a(i, j) == 0) continue;
            const Rat f = a(i, j) / a(piv, j);
            for (int c = 0; c < 3; ++c) a(i, c) -= f * a(piv, c);
            for (int c = 0; c < 3; ++c) l_inv(c, piv) += f * l_inv(c, i);
        }
    }

    // a is now monomial with pivots at (pivot_row[j], j); match it to d * rep(w).
    std::array<int, 3> sigma{pivot_row[0], pivot_row[1], pivot_row[2]};
    Weyl w = Weyl::e;
    bool found = false;
    for (Weyl cand : kAllWeyl)
        if (weyl_perm(cand) == sigma) {
            w = cand;
            found = true;
            break;
        }
    if (!found) throw std::logic_error("pivot pattern is not a permutation");

    const MatQ d = a * weyl_rep(w).inverse();
    BruhatFactorization f;
    f.w = w;
    f.p = l_inv * d;
    f.n = UnipQ::from_matrix(r_inv);
    return f;
}

}  // namespace triflag
