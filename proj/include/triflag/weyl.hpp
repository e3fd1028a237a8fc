#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "triflag/group.hpp"
#include "triflag/mat3.hpp"

namespace triflag {

/// The six Weyl classes of SL3, named as usual: z1 = s2*s1, z2 = s1*s2,
/// w0 = s1*s2*s1 = s2*s1*s2 (the long element).
enum class Weyl { e, s1, s2, z1, z2, w0 };

constexpr std::array<Weyl, 6> kAllWeyl{Weyl::e, Weyl::s1, Weyl::s2, Weyl::z1, Weyl::z2, Weyl::w0};

constexpr int weyl_index(Weyl w) { return static_cast<int>(w); }

constexpr int weyl_length(Weyl w) {
    constexpr std::array<int, 6> len{0, 1, 1, 2, 2, 3};
    return len[weyl_index(w)];
}

inline std::string weyl_name(Weyl w) {
    constexpr std::array<std::string_view, 6> names{"1", "s1", "s2", "z1", "z2", "w0"};
    return std::string(names[weyl_index(w)]);
}

inline Weyl weyl_from_name(std::string_view s) {
    for (Weyl w : kAllWeyl)
        if (weyl_name(w) == s) return w;
    throw std::invalid_argument("unknown Weyl element: \"" + std::string(s) + '"');
}

/// Underlying permutation, sigma[j] = row of the nonzero entry in column j
/// (so the representative maps e_j to +-e_{sigma(j)}), 0-indexed.
constexpr std::array<int, 3> weyl_perm(Weyl w) {
    constexpr std::array<std::array<int, 3>, 6> perms{{{0, 1, 2},
                                                       {1, 0, 2},
                                                       {0, 2, 1},
                                                       {2, 0, 1},
                                                       {1, 2, 0},
                                                       {2, 1, 0}}};
    return perms[weyl_index(w)];
}

/// Fixed signed-permutation representatives in SL3(Q); all downstream tables
/// are pinned to these exact matrices.
inline const MatQ& weyl_rep(Weyl w) {
    static const std::array<MatQ, 6> reps = [] {
        std::array<MatQ, 6> r{};
        auto set = [](MatQ& m, int r0c, int r0v, int r1c, int r1v, int r2c, int r2v) {
            m = MatQ::zero();
            m(0, r0c) = r0v;
            m(1, r1c) = r1v;
            m(2, r2c) = r2v;
        };
        set(r[0], 0, 1, 1, 1, 2, 1);     // identity
        set(r[1], 1, 1, 0, 1, 2, -1);    // s1
        set(r[2], 0, -1, 2, 1, 1, 1);    // s2
        set(r[3], 1, -1, 2, -1, 0, 1);   // z1
        set(r[4], 2, 1, 0, -1, 1, -1);   // z2
        set(r[5], 2, -1, 1, -1, 0, -1);  // w0
        return r;
    }();
    return reps[weyl_index(w)];
}

/// Group law (exact: products of representatives agree with the table's
/// representative up to an element of D).
inline Weyl weyl_mul(Weyl a, Weyl b) {
    const auto pa = weyl_perm(a), pb = weyl_perm(b);
    const std::array<int, 3> pc{pa[pb[0]], pa[pb[1]], pa[pb[2]]};
    for (Weyl w : kAllWeyl)
        if (weyl_perm(w) == pc) return w;
    throw std::logic_error("permutation composition fell outside the table");
}

inline Weyl weyl_inv(Weyl a) {
    for (Weyl w : kAllWeyl)
        if (weyl_mul(a, w) == Weyl::e) return w;
    throw std::logic_error("unreachable");
}

/// Full 6x6 multiplication table, rows*cols in the kAllWeyl order.
inline std::array<std::array<Weyl, 6>, 6> weyl_table() {
    std::array<std::array<Weyl, 6>, 6> t{};
    for (Weyl a : kAllWeyl)
        for (Weyl b : kAllWeyl) t[weyl_index(a)][weyl_index(b)] = weyl_mul(a, b);
    return t;
}

/// Bruhat order on W (subword order; the closure order of the cells of P\G).
inline bool bruhat_leq(Weyl a, Weyl b) {
    if (a == Weyl::e || a == b || b == Weyl::w0) return true;
    if (weyl_length(a) == 1) return weyl_length(b) >= 2 && b != Weyl::e;
    return false;  // a in {z1,z2,w0}: only covered by the cases above
}

// --- subgroup shape masks ------------------------------------------------

/// Matrix shape of a subgroup: each entry is forced zero, free, or a
/// (nonzero) diagonal entry.  `unit_diag` marks unipotent shapes where the
/// diagonal is pinned to 1.
struct SubgroupPattern {
    enum class Cell { zero, free, diag };
    std::array<std::array<Cell, 3>, 3> cell{};
    bool unit_diag = false;

    bool matches(const MatQ& m) const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                switch (cell[i][j]) {
                    case Cell::zero:
                        if (m(i, j) != 0) return false;
                        break;
                    case Cell::diag:
                        if (unit_diag ? m(i, j) != 1 : m(i, j) == 0) return false;
                        break;
                    case Cell::free:
                        break;
                }
            }
        return true;
    }
};

/// Shape of v^{-1} P v (P = upper triangular): entry (i,j) is free iff
/// sigma(i) <= sigma(j).
inline SubgroupPattern conj_parabolic_pattern(Weyl v) {
    const auto s = weyl_perm(v);
    SubgroupPattern p;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j)
                p.cell[i][j] = SubgroupPattern::Cell::diag;
            else
                p.cell[i][j] = s[i] <= s[j] ? SubgroupPattern::Cell::free
                                            : SubgroupPattern::Cell::zero;
        }
    return p;
}

/// Which of the coordinates (x,y,z) of n(x,y,z) are free in N_v = N ∩ v^{-1}Nv.
struct NvMask {
    bool x = false, y = false, z = false;
};

inline NvMask n_v_mask(Weyl v) {
    const auto s = weyl_perm(v);
    return {s[0] < s[1], s[0] < s[2], s[1] < s[2]};
}

inline SubgroupPattern n_v_pattern(Weyl v) {
    const auto mask = n_v_mask(v);
    SubgroupPattern p;
    p.unit_diag = true;
    using C = SubgroupPattern::Cell;
    for (int i = 0; i < 3; ++i) p.cell[i][i] = C::diag;
    p.cell[1][0] = p.cell[2][0] = p.cell[2][1] = C::zero;
    p.cell[0][1] = mask.x ? C::free : C::zero;
    p.cell[0][2] = mask.y ? C::free : C::zero;
    p.cell[1][2] = mask.z ? C::free : C::zero;
    return p;
}

/// Upper-triangular (minimal parabolic) shape.
inline SubgroupPattern p_pattern() { return conj_parabolic_pattern(Weyl::e); }

inline bool in_parabolic(const MatQ& m) { return p_pattern().matches(m); }

}  // namespace triflag
