#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "triflag/bruhat.hpp"
#include "triflag/group.hpp"
#include "triflag/lie.hpp"
#include "triflag/mat3.hpp"
#include "triflag/weyl.hpp"

namespace triflag {

/// A point of X = (P\G)^3, stored through coset representatives.
struct TriplePoint {
    MatQ g1, g2, g3;

    static TriplePoint of(const MatQ& a, const MatQ& b, const MatQ& c) { return {a, b, c}; }

    TriplePoint translated(const MatQ& g) const { return {g1 * g, g2 * g, g3 * g}; }

    TriplePoint flipped() const { return {g1, g3, g2}; }
};

struct CellLabel {
    Weyl v = Weyl::e, w = Weyl::e;

    friend bool operator==(const CellLabel&, const CellLabel&) = default;
    friend auto operator<=>(const CellLabel&, const CellLabel&) = default;

    int dim() const { return 3 + weyl_length(v) + weyl_length(w); }
};

/// Canonical representative of a class in N_w\N/N_v modulo D-conjugation:
/// either a 0/1 coordinate pattern or, on the open cell only, the family
/// n(1,1,u) with its parameter u != 0.
struct CanonicalRep {
    enum class Kind { isolated, family };
    Kind kind = Kind::isolated;
    std::array<bool, 3> pattern{false, false, false};  // x,y,z nonzero?
    Rat u = 0;                                         // family parameter

    static CanonicalRep isolated(bool px, bool py, bool pz) {
        return {Kind::isolated, {px, py, pz}, 0};
    }
    static CanonicalRep family(const Rat& u) { return {Kind::family, {true, true, true}, u}; }

    UnipQ element() const {
        if (kind == Kind::family) return {1, 1, u};
        return {pattern[0] ? 1 : 0, pattern[1] ? 1 : 0, pattern[2] ? 1 : 0};
    }

    friend bool operator==(const CanonicalRep&, const CanonicalRep&) = default;
    friend auto operator<=>(const CanonicalRep&, const CanonicalRep&) = default;

    std::string to_string() const {
        if (kind == Kind::family) return "n(1,1,u), u=" + rat_to_string(u);
        std::string s = "n(";
        s += pattern[0] ? '1' : '0';
        s += ',';
        s += pattern[1] ? '1' : '0';
        s += ',';
        s += pattern[2] ? '1' : '0';
        return s + ')';
    }
};

/// Deterministic reduction of n under n ~ n_w (d n d^-1) n_v, n_w in N_w
/// acting on the left, n_v in N_v on the right, d in D.
///
/// Translation phase: kill x (left p, else right p), then z (left r, else
/// right r), then y (left/right q; else the two-sided composites that move y
/// by x*r or z*p when both sides provide the same coordinate).  Scaling
/// phase: D-conjugation acts as (x,y,z) -> (ax, ab y, bz) for free a,b; every
/// surviving coordinate scales to 1 except on the open cell with xyz != 0,
/// where u = xz/y survives and identifies the class of n(1,1,u).
inline CanonicalRep canonicalize(const CellLabel& cell, const UnipQ& n_in) {
    const NvMask L = n_v_mask(cell.w);  // left moves (N_w)
    const NvMask R = n_v_mask(cell.v);  // right moves (N_v)
    Rat x = n_in.x, y = n_in.y, z = n_in.z;

    if (L.x) {  // n(p,0,0) * n : x += p, y += p z
        y -= x * z;
        x = 0;
    } else if (R.x) {  // n * n(p,0,0) : x += p
        x = 0;
    }
    if (L.z) {  // n(0,0,r) * n : z += r
        z = 0;
    } else if (R.z) {  // n * n(0,0,r) : z += r, y += x r
        y -= x * z;
        z = 0;
    }
    if (L.y || R.y) {
        y = 0;
    } else if (x != 0 && L.z && R.z) {
        y = 0;  // right r shifts y by x*r, left r restores z
    } else if (z != 0 && L.x && R.x) {
        y = 0;  // left p shifts y by p*z, right p restores x
    }

    if (x != 0 && y != 0 && z != 0) {
        if (!(cell.v == Weyl::w0 && cell.w == Weyl::w0))
            throw std::logic_error("family class outside the open cell");
        return CanonicalRep::family(x * z / y);
    }
    return CanonicalRep::isolated(x != 0, y != 0, z != 0);
}

/// The relative position pair ( bruhat_cell(g2 g1^{-1}), bruhat_cell(g3 g1^{-1}) ).
inline CellLabel schubert_cell(const TriplePoint& p) {
    const MatQ gi = p.g1.inverse();
    return {bruhat_cell(p.g2 * gi), bruhat_cell(p.g3 * gi)};
}

/// Dimension of the stabilizer Lie algebra p ∩ Ad(v^{-1})p ∩ Ad((wn)^{-1})p.
inline int stabilizer_dim(const CellLabel& cell, const UnipQ& n) {
    return stabilizer_algebra(weyl_rep(cell.v), weyl_rep(cell.w) * n.to_matrix()).dim();
}

// --- stabilizer witness data (the families printed next to each class) ----

/// Parametric family of claimed stabilizer elements: an upper triangular
/// matrix with diagonal of given kind and a set of free strict-upper entries.
struct StabilizerWitness {
    enum class DiagKind { trivial, one_param, full };
    DiagKind diag = DiagKind::trivial;
    std::array<int, 3> exps{0, 0, 0};              // one_param: d(a^e1, a^e2, a^e3)
    std::array<bool, 3> upper{false, false, false};  // free entries (1,2),(1,3),(2,3)

    int dim() const {
        int d = diag == DiagKind::full ? 2 : (diag == DiagKind::one_param ? 1 : 0);
        return d + upper[0] + upper[1] + upper[2];
    }

    /// Builds the element for given parameter values (a,b nonzero).
    MatQ element(const Rat& a, const Rat& b, const Rat& u12, const Rat& u13, const Rat& u23) const {
        Rat d1 = 1, d2 = 1, d3 = 1;
        if (diag == DiagKind::full) {
            d1 = a;
            d2 = b;
            d3 = Rat(1) / (a * b);
        } else if (diag == DiagKind::one_param) {
            auto pw = [&](int e) {
                Rat r = 1;
                for (int i = 0; i < (e < 0 ? -e : e); ++i) r *= a;
                return e < 0 ? Rat(1) / r : r;
            };
            d1 = pw(exps[0]);
            d2 = pw(exps[1]);
            d3 = pw(exps[2]);
        }
        MatQ m = MatQ::diag(d1, d2, d3);
        if (upper[0]) m(0, 1) = u12;
        if (upper[1]) m(0, 2) = u13;
        if (upper[2]) m(1, 2) = u23;
        return m;
    }
};

struct OrbitClass {
    CellLabel cell;
    CanonicalRep rep;
    int orbit_dim = 0;
    int stab_dim = 0;
    LieSubspace stab_basis;
    std::optional<StabilizerWitness> witness;  // present where the source tables list one
};

namespace detail {

inline std::optional<StabilizerWitness> witness_for(const CellLabel& c, const CanonicalRep& r) {
    using DK = StabilizerWitness::DiagKind;
    auto W = [](DK k, std::array<int, 3> e, std::array<bool, 3> u) {
        StabilizerWitness w;
        w.diag = k;
        w.exps = e;
        w.upper = u;
        return w;
    };
    const std::array<int, 3> aab{1, 1, -2}, aba{1, -2, 1}, baa{-2, 1, 1}, nil{0, 0, 0};
    const std::array<bool, 3> none{false, false, false};
    const std::array<bool, 3> u12{true, false, false}, u13{false, true, false},
        u23{false, false, true};

    const Weyl v = c.v, w_ = c.w;
    const bool fam = r.kind == CanonicalRep::Kind::family;
    const auto& p = r.pattern;
    auto pat = [&](bool a, bool b, bool cc) { return !fam && p == std::array<bool, 3>{a, b, cc}; };

    if (v == Weyl::w0) {
        if (w_ == Weyl::w0) {
            if (fam || pat(false, true, true) || pat(true, false, true) || pat(true, true, false))
                return W(DK::trivial, nil, none);
            if (pat(true, false, false)) return W(DK::one_param, aab, none);
            if (pat(false, true, false)) return W(DK::one_param, aba, none);
            if (pat(false, false, true)) return W(DK::one_param, baa, none);
            return W(DK::full, nil, none);
        }
        if (w_ == Weyl::z1) {
            if (pat(true, true, false)) return W(DK::trivial, nil, none);
            if (pat(true, false, false)) return W(DK::one_param, aab, none);
            if (pat(false, true, false)) return W(DK::one_param, aba, none);
            return W(DK::full, nil, none);
        }
        if (w_ == Weyl::z2) {
            if (pat(false, true, true)) return W(DK::trivial, nil, none);
            if (pat(false, false, true)) return W(DK::one_param, baa, none);
            if (pat(false, true, false)) return W(DK::one_param, aba, none);
            return W(DK::full, nil, none);
        }
        if (w_ == Weyl::s1)
            return pat(true, false, false) ? W(DK::one_param, aab, none) : W(DK::full, nil, none);
        if (w_ == Weyl::s2)
            return pat(false, false, true) ? W(DK::one_param, baa, none) : W(DK::full, nil, none);
        return W(DK::full, nil, none);  // (w0, 1)
    }
    if (v == Weyl::z1) {
        if (w_ == Weyl::z1) {
            if (pat(true, false, false)) return W(DK::one_param, aab, none);
            if (pat(false, true, false)) return W(DK::one_param, aba, u23);
            return W(DK::full, nil, u23);
        }
        if (w_ == Weyl::z2)
            return pat(false, true, false) ? W(DK::one_param, aba, none) : W(DK::full, nil, none);
        if (w_ == Weyl::s1)
            return pat(true, false, false) ? W(DK::one_param, aab, u23) : W(DK::full, nil, u23);
        if (w_ == Weyl::s2) return W(DK::full, nil, none);
        if (w_ == Weyl::e) return W(DK::full, nil, u23);
        return std::nullopt;  // (z1, w0): by flip, not listed
    }
    if (v == Weyl::z2) {
        if (w_ == Weyl::z2) {
            if (pat(false, false, true)) return W(DK::one_param, baa, none);
            if (pat(false, true, false)) return W(DK::one_param, aba, u12);
            return W(DK::full, nil, u12);
        }
        if (w_ == Weyl::s1) return W(DK::full, nil, none);
        if (w_ == Weyl::s2)
            return pat(false, false, true) ? W(DK::one_param, baa, u12) : W(DK::full, nil, u12);
        if (w_ == Weyl::e) return W(DK::full, nil, u12);
        return std::nullopt;  // (z2, z1), (z2, w0)
    }
    if (v == Weyl::s1) {
        if (w_ == Weyl::s1) {
            if (pat(true, false, false))
                return W(DK::one_param, aab, {false, true, true});
            return W(DK::full, nil, {false, true, true});
        }
        if (w_ == Weyl::s2) return W(DK::full, nil, u13);
        if (w_ == Weyl::e) return W(DK::full, nil, {false, true, true});
        return std::nullopt;
    }
    if (v == Weyl::s2) {
        if (w_ == Weyl::s2) {
            if (pat(false, false, true))
                return W(DK::one_param, baa, {true, true, false});
            return W(DK::full, nil, {true, true, false});
        }
        if (w_ == Weyl::e) return W(DK::full, nil, {true, true, false});
        return std::nullopt;
    }
    if (v == Weyl::e && w_ == Weyl::e) return W(DK::full, nil, {true, true, true});  // P
    return std::nullopt;
}

}  // namespace detail

/// Builds the class record for a cell and canonical representative.
inline OrbitClass make_class(const CellLabel& cell, const CanonicalRep& rep) {
    OrbitClass oc;
    oc.cell = cell;
    oc.rep = rep;
    oc.stab_basis = stabilizer_algebra(weyl_rep(cell.v), weyl_rep(cell.w) * rep.element().to_matrix());
    oc.stab_dim = oc.stab_basis.dim();
    oc.orbit_dim = 8 - oc.stab_dim;
    oc.witness = detail::witness_for(cell, rep);
    return oc;
}

/// Classifies a triple of flags: normalizes the first coordinate, factors the
/// second (absorbing its N-part into the group action), factors the third,
/// and canonicalizes the remaining unipotent coordinate.
inline OrbitClass orbit_of(const TriplePoint& p) {
    for (const MatQ* g : {&p.g1, &p.g2, &p.g3})
        if (g->det() != 1) throw std::invalid_argument("orbit_of: coordinates must have det 1");
    const MatQ g1i = p.g1.inverse();
    const MatQ h2 = p.g2 * g1i;
    const auto f2 = bruhat_factor(h2);
    const MatQ n2i = unip_inv(f2.n).to_matrix();
    const MatQ h3 = p.g3 * g1i * n2i;
    const auto f3 = bruhat_factor(h3);
    const CellLabel cell{f2.w, f3.w};
    return make_class(cell, canonicalize(cell, f3.n));
}

/// All classes of a cell: the canonical images of the 0/1 coordinate
/// patterns, plus (on the open cell) the family marker, here recorded at u=1.
struct CellCatalog {
    CellLabel cell;
    std::vector<OrbitClass> isolated;
    bool has_family = false;
};

inline CellCatalog enumerate_cell(const CellLabel& cell) {
    CellCatalog cat;
    cat.cell = cell;
    std::vector<CanonicalRep> reps;
    for (int bits = 0; bits < 8; ++bits) {
        const UnipQ n{bits & 1 ? 1 : 0, bits & 2 ? 1 : 0, bits & 4 ? 1 : 0};
        const CanonicalRep r = canonicalize(cell, n);
        if (r.kind == CanonicalRep::Kind::family) {
            cat.has_family = true;
            continue;
        }
        bool seen = false;
        for (const auto& q : reps) seen = seen || q == r;
        if (!seen) reps.push_back(r);
    }
    for (const auto& r : reps) cat.isolated.push_back(make_class(cell, r));
    return cat;
}

inline std::vector<CellCatalog> enumerate_orbits() {
    std::vector<CellCatalog> all;
    for (Weyl v : kAllWeyl)
        for (Weyl w : kAllWeyl) all.push_back(enumerate_cell({v, w}));
    return all;
}

/// Product Bruhat order: the closure order on the 36 cells.
inline bool closure_leq(const CellLabel& a, const CellLabel& b) {
    return bruhat_leq(a.v, b.v) && bruhat_leq(a.w, b.w);
}

// --- closure witnesses -----------------------------------------------------

/// One-parameter lower-unipotent curves l(eps) with entries
/// (2,1) = c1 eps, (3,2) = c2 eps, (3,1) = c3 eps + c4 eps^2.
struct CurveTemplate {
    int c1 = 0, c2 = 0, c3 = 0, c4 = 0;

    MatQ at(const Rat& eps) const {
        MatQ l = MatQ::identity();
        l(1, 0) = Rat(c1) * eps;
        l(2, 1) = Rat(c2) * eps;
        l(2, 0) = Rat(c3) * eps + Rat(c4) * eps * eps;
        return l;
    }
};

struct ClosureWitness {
    bool found = false;
    CurveTemplate second, third;  // perturbations of the two moving coordinates
};

namespace detail {

/// A template moving cell(small_rep * l(eps)) into `big` for all tested eps.
inline std::optional<CurveTemplate> find_curve(Weyl small, Weyl big, int trials) {
    if (small == big) return CurveTemplate{};
    const std::array<Rat, 3> epses{rat(1, 2), rat(1, 4), rat(1, 8)};
    int tried = 0;
    for (int bits = 0; bits < 16 && tried < trials; ++bits, ++tried) {
        const CurveTemplate t{bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1};
        bool ok = true;
        for (const auto& e : epses) ok = ok && bruhat_cell(weyl_rep(small) * t.at(e)) == big;
        if (ok) return t;
    }
    return std::nullopt;
}

}  // namespace detail

/// Constructs a curve x(eps) = (1, v1 l(eps), w1 l'(eps)) with
/// schubert_cell(x(eps)) = big for eps != 0 and x(0) a representative of
/// small.  Requires small <= big in the closure order.
inline ClosureWitness closure_witness(const CellLabel& small, const CellLabel& big,
                                      int trials = 16) {
    ClosureWitness w;
    if (!closure_leq(small, big)) return w;
    const auto t2 = detail::find_curve(small.v, big.v, trials);
    const auto t3 = detail::find_curve(small.w, big.w, trials);
    if (t2 && t3) {
        w.found = true;
        w.second = *t2;
        w.third = *t3;
    }
    return w;
}

/// Symmetry of the classification under (g1,g2,g3) -> (g1,g3,g2): per-cell
/// counts and dimension multisets transpose.
inline bool flip_check() {
    for (Weyl v : kAllWeyl)
        for (Weyl w : kAllWeyl) {
            const auto a = enumerate_cell({v, w});
            const auto b = enumerate_cell({w, v});
            if (a.has_family != b.has_family) return false;
            if (a.isolated.size() != b.isolated.size()) return false;
            std::vector<int> da, db;
            for (const auto& c : a.isolated) da.push_back(c.orbit_dim);
            for (const auto& c : b.isolated) db.push_back(c.orbit_dim);
            std::sort(da.begin(), da.end());
            std::sort(db.begin(), db.end());
            if (da != db) return false;
        }
    return true;
}

}  // namespace triflag
